#pragma once

#include "epaut/ambient.hpp"
#include "epaut/phase_space.hpp"

namespace epaut {

struct IsotropyWitness {
  LeftAlgebraElement xi;  // vanishes on the curve Q(S)
  Field term_p;           // P o (grad u) at the nodes
  Field term_sigma;       // <sigma, d nu> at the nodes
  double residual = 0.0;  // max |P' + term_p + term_sigma|
  double cutoff = 0.0;    // bump radius around Q(S)
  double reach = 0.0;
};

// Estimated reach of the closed curve Q(S): min of the smallest curvature radius
// and half the smallest distance between points at least a quarter turn apart.
double estimate_reach(const CotangentState& z);

// Random covector field annihilating the tangent of Q(S), scaled by `amplitude`.
Field random_conormal(const CotangentState& z, std::uint64_t seed, double amplitude = 1.0);

// (u, nu) = -f (P^#, sigma^#) with f(y) = chi(dist) lambda_{p(y)} (y - p(y)) and
// lambda = P' / (|P|^2 + |sigma|^2_*), so that -D u^T P - D nu^T sigma = P' on Q(S).
// Requires a grid source on R^d and a regular state. Throws NotConormal when
// |P' . DQ| exceeds `conormal_tol` and ProjectionFailed when the nearest point
// on Q(S) is not unique.
IsotropyWitness isotropy_witness(const CotangentState& z, const Field& target,
                                 double conormal_tol = 1e-8, double fd_step = 1e-6);

}  // namespace epaut
