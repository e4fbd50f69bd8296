#pragma once

#include <vector>

#include <Eigen/Dense>

#include "epaut/momentum_maps.hpp"
#include "epaut/observables.hpp"
#include "epaut/phase_space.hpp"
#include "epaut/random.hpp"

namespace epaut {

// Incompressible setting: Q holds q (lifted torus coordinates), P holds p, so that
// (q, p): S -> T*M with M a flat torus. The right action is by composition.
using VolState = CotangentState;

// Throws Error unless the source is a periodic grid, the ambient a torus and
// (q, p, sigma) separates nodes by at least eps_emb.
void validate_vol_state(const VolState& z, double eps_emb = 1e-8);
// min_{i != j} |(q, p, sigma)_i - (q, p, sigma)_j| with q compared on the torus.
double vol_embedding_margin(const VolState& z);
// random_state on T^d with a wobbling curve.
VolState random_vol_state(int n, int d, const StructureGroup& grp, CounterRng& rng,
                          double wobble = 0.3);

// (z o psi) with gamma o psi times b; no Jacobian factors.
VolState act_right_vol(const VolState& z, const RightTransformer& r);

// One point of T*M x T*O in right-trivialized form.
struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd sigma;
  GroupElement g;
};
// Tangent with eta = (dg) g^{-1}.
struct PhaseTangent {
  Eigen::VectorXd dq;
  Eigen::VectorXd dp;
  Eigen::VectorXd eta;
  Eigen::VectorXd dsigma;
};

PhasePoint node_point(const VolState& z, int i);
PhaseTangent node_tangent(const StateTangent& t, int i);
PhasePoint perturb(const StructureGroup& grp, const PhasePoint& x, const PhaseTangent& v,
                   double eps);
PhaseTangent central_difference(const StructureGroup& grp, const PhasePoint& plus,
                                const PhasePoint& minus, double eps);
// p . dq + <sigma, eta>
double theta_point(const PhasePoint& x, const PhaseTangent& v);
// Pointwise form of omega_bar.
double omega_point(const StructureGroup& grp, const PhasePoint& x, const PhaseTangent& a,
                   const PhaseTangent& b);

// Covector on M x O: p at q and K at g, with O embedded in 3x3 matrices and K
// paired with tangent vectors V at g by tr(K^T V).
struct BundleCovector {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::Matrix3d K;
  GroupElement g;
};
// sigma_a = tr(K^T E_a g) with E_a the basis of o in the matrix embedding.
PhasePoint rho(const StructureGroup& grp, const BundleCovector& c);
// K = (1/2) sum_a sigma_a E_a g, the representative tangent to O.
BundleCovector rho_inverse(const StructureGroup& grp, const PhasePoint& x);
// Cotangent lift of right multiplication: (K h, g h).
BundleCovector act_right(const BundleCovector& c, const GroupElement& h);
Eigen::Matrix3d algebra_matrix(const StructureGroup& grp, int a);

double omega_bar(const VolState& z, const StateTangent& a, const StateTangent& b);
double jl_vol(const VolState& z, const Observable& h);
RightMomentum jr_vol(const VolState& z);
// Differential of jr_vol; alpha = dp.Dq + p.D(dq) + <coad(eta, sigma) + dsigma, r> +
// <sigma, D eta>, nu = coAd(gamma, coad(eta, sigma) + dsigma).
RightMomentum d_jr_vol(const VolState& z, const StateTangent& t);

// {f, g} = f_q . g_p - f_p . g_q + <sigma, [f_sigma, g_sigma]>, so that
// dg/dt = {g, h} along the field of h.
double reduced_poisson(const Observable& f, const Observable& g, const PhasePoint& x,
                       const StructureGroup& grp);
// {f, g} as an Observable, partials by central differences.
Observable poisson_observable(const Observable& f, const Observable& g, const StructureGroup& grp);
// (h_p, -h_q, h_sigma, -coad(h_sigma, sigma)) in PhaseTangent order (dq, dp, eta, dsigma).
PhaseTangent trivialized_hvf(const Observable& h, const PhasePoint& x, const StructureGroup& grp);
StateTangent chromo_generator(const Observable& h, const VolState& z);

// Right generators of the volume-preserving action on S^1: v constant, zeta arbitrary.
std::vector<RightAlgebraElement> vol_right_basis(const SourceManifold& s, const StructureGroup& grp,
                                                 int kr);
StateTangent vol_right_generator(const RightAlgebraElement& xi, const VolState& z);

}  // namespace epaut
