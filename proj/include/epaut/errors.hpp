#pragma once

#include <stdexcept>
#include <string>

namespace epaut {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define EPAUT_DEFINE_ERROR(name)              \
  class name : public Error {                 \
   public:                                    \
    explicit name(const std::string& what)    \
        : Error(#name ": " + what) {}         \
  };

EPAUT_DEFINE_ERROR(CutLocus)
EPAUT_DEFINE_ERROR(PointCloudHasNoDerivative)
EPAUT_DEFINE_ERROR(NonMonotone)
EPAUT_DEFINE_ERROR(NotRegular)
EPAUT_DEFINE_ERROR(NotConormal)
EPAUT_DEFINE_ERROR(ProjectionFailed)
EPAUT_DEFINE_ERROR(ImagesDiffer)
EPAUT_DEFINE_ERROR(NotInLevelSet)
EPAUT_DEFINE_ERROR(NoConvergence)
EPAUT_DEFINE_ERROR(QuadratureNotConverged)
EPAUT_DEFINE_ERROR(NotVolumePreserving)
EPAUT_DEFINE_ERROR(NotDivergenceFree)
EPAUT_DEFINE_ERROR(ConfigInvalid)
EPAUT_DEFINE_ERROR(AssertionFailed)

#undef EPAUT_DEFINE_ERROR

}  // namespace epaut
