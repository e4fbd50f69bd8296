#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "epaut/phase_space.hpp"

namespace epaut {

// Counter-based generator: output k of stream s is splitmix64(seed, s, k).
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  Eigen::VectorXd normal_vector(int n);
  CounterRng split(std::uint64_t stream) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

GroupElement random_group_element(const StructureGroup& grp, CounterRng& rng);
AlgebraVector random_algebra(const StructureGroup& grp, CounterRng& rng, double scale = 1.0);

// Random real trigonometric polynomial samples with modes 1..kmax, each
// coefficient ~ amplitude * N(0,1) / k^2.
Field random_band_limited(const SourceManifold& s, int cols, int kmax, double amplitude,
                          CounterRng& rng);

struct StateSampler {
  int nodes = 32;
  AmbientManifold ambient = AmbientManifold::torus(1);
  StructureGroup group = StructureGroup::rotation3();
  int momentum_modes = 2;
  double momentum_amplitude = 0.5;
  double momentum_offset = 0.6;   // added to keep (P, sigma) away from zero
  int gauge_modes = 2;
  double gauge_amplitude = 0.4;
  double curve_wobble = 0.0;      // torus: Q = x + c + wobble * band-limited
  double radius_min = 0.6, radius_max = 1.2;  // Euclidean d >= 2: circle radius
  Eigen::VectorXd center;         // Euclidean: circle center (default origin)
  double min_regularity = 0.05;
};

// Random regular state on a periodic grid. On T^d the curve winds once along the
// first axis; on R^d it is a circle in the first two coordinates around `center`.
CotangentState random_state(const StateSampler& opts, CounterRng& rng);
// Unit-weight point cloud with Gaussian positions of spread radius_max around `center`.
CotangentState random_point_cloud_state(const StateSampler& opts, CounterRng& rng);

RightTransformer random_right_transformer(const SourceManifold& s, const StructureGroup& grp,
                                          CounterRng& rng, double wobble = 0.15,
                                          double gauge = 0.4, bool volume_preserving = false);
RightAlgebraElement random_right_element(const SourceManifold& s, const StructureGroup& grp,
                                         CounterRng& rng, int modes = 3);
LeftAlgebraElement random_left_element(const AmbientManifold& m, const StructureGroup& grp,
                                       CounterRng& rng, int k = 2, double scale = 0.3,
                                       const ScalarBasisOptions& opts = {});

}  // namespace epaut
