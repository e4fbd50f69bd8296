#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epaut/momentum_maps.hpp"
#include "epaut/phase_space.hpp"

namespace epaut {

struct SymplecticChart {
  Eigen::MatrixXd omega;  // v1^T omega v2 in StateLayout coordinates
  double condition_number = 0.0;
};

// Weighted canonical blocks for (Q, P) and, per node, the right-trivialized T*O block
// <dsigma2, eta1> - <dsigma1, eta2> - <sigma, [eta1, eta2]>.
SymplecticChart assemble_chart(const CotangentState& z, bool with_condition = true);
double omega_pair(const CotangentState& z, const StateTangent& a, const StateTangent& b);

struct GeneratorBasis {
  Eigen::MatrixXd columns;  // cotangent-lifted generators in StateLayout coordinates
  int count() const { return static_cast<int>(columns.cols()); }
};

// v and zeta components range over cos(kx), sin(kx), k <= kr (zeta times each e_a).
std::vector<RightAlgebraElement> right_basis(const SourceManifold& s, const StructureGroup& grp,
                                             int kr);
GeneratorBasis left_generator_basis(const CotangentState& z,
                                    const std::vector<LeftAlgebraElement>& basis);
GeneratorBasis right_generator_basis(const CotangentState& z,
                                     const std::vector<RightAlgebraElement>& basis);

// max_ij |A_i^T Omega B_j| / (|Omega A_i| |B_j|)
double orthogonality_residual(const GeneratorBasis& a, const GeneratorBasis& b,
                              const Eigen::MatrixXd& omega);

struct SubspaceReport {
  int state_dim = 0;
  int jacobian_rank = 0;
  int kernel_dim = 0;
  int orbit_rank = 0;
  int excess = 0;                    // kernel_dim - orbit_rank
  double inclusion_residual = 0.0;   // max_j |J b_j| / (|J|_2 |b_j|)
  double uncovered_dimension = 0.0;  // kernel_dim - sum cos^2(principal angles)
  double largest_angle = 0.0;        // radians, largest principal angle
  Eigen::VectorXd cosines;           // principal-angle cosines, descending
};

// Null space of `jacobian` against the span of `orbit` (SVD, rank tolerance
// rank_tol * s_max). No regularity check.
SubspaceReport compare_subspaces(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& orbit,
                                 double rank_tol = 1e-10);
// As compare_subspaces, but throws NotRegular if z leaves T*Q^x.
SubspaceReport kernel_vs_orbit(const CotangentState& z, const Eigen::MatrixXd& jacobian,
                               const GeneratorBasis& orbit, double eps_reg = 1e-8,
                               double rank_tol = 1e-10);

struct ChartValidation {
  double canonical_block_error = 0.0;  // relative, (Q, P) pairs only
  double group_block_error = 0.0;      // relative, (gamma, sigma) pairs only
  double mixed_error = 0.0;            // relative, generic pairs
  int pairs = 0;
};
// Compares omega_pair against -dTheta computed by central differences of the
// canonical one-form in exponential chart coordinates gamma = exp(theta) gamma_0.
ChartValidation validate_chart(const CotangentState& z, std::uint64_t seed, int pairs = 10,
                               double h = 1e-5);

}  // namespace epaut
