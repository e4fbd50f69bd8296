#pragma once

#include "epaut/phase_space.hpp"
#include "epaut/yang_mills.hpp"

namespace epaut {

struct ReconstructOptions {
  int test_modes = 4;          // truncation of the left test basis for the level-set check
  double level_tol = 1e-6;     // relative jl mismatch allowed
  double image_tol = 1e-8;     // distance between matched curve points
  double verify_tol = 1e-6;    // max deviation of coact_right(z1, result) from z2
  double volume_tol = 1e-6;    // max |psi' - 1| accepted by reconstruct_vol
};

struct RightReconstruction {
  RightTransformer transformer;
  double level_mismatch = 0.0;
  double image_mismatch = 0.0;
  double verify_error = 0.0;
};

// Max relative difference of jl(z1) and jl(z2) over a truncated left basis.
double level_set_mismatch(const CotangentState& z1, const CotangentState& z2, int test_modes);

// Finds (psi, b) with coact_right(z1, (psi, b)) = z2: psi by monotone matching of the
// two parameterizations of the common image, then b = (gamma1 o psi)^{-1} gamma2.
// Throws NotInLevelSet if the jl values differ or the final check fails, and
// ImagesDiffer if a point of Q2 is not on Q1(S).
RightReconstruction reconstruct_right(const CotangentState& z1, const CotangentState& z2,
                                      const ReconstructOptions& opts = {});

// Max relative difference of jl_vol over observable_basis(d, m, k_max, 2).
double vol_level_set_mismatch(const VolState& z1, const VolState& z2, int k_max);
// Finds (psi, b) with act_right_vol(z1, (psi, b)) = z2. Checks, in order: the
// (q, p, sigma) images agree (ImagesDiffer), psi preserves the measure
// (NotVolumePreserving), the jl_vol values agree and the result reproduces z2
// (NotInLevelSet). The level-set check uses test_modes as the Fourier cutoff.
RightReconstruction reconstruct_vol(const VolState& z1, const VolState& z2,
                                    const ReconstructOptions& opts = {});

}  // namespace epaut
