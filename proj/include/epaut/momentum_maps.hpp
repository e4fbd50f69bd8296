#pragma once

#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "epaut/phase_space.hpp"

namespace epaut {

// Left momentum as a weighted list of point momenta.
struct DiracMomentum {
  Field points;          // Q_i
  Field weighted_p;      // w_i P_i
  Field weighted_sigma;  // w_i sigma_i
};

// Right momentum: alpha is a representative of a one-form class on S (empty for
// point clouds), nu the o*-valued charge density.
struct RightMomentum {
  Eigen::VectorXd alpha;
  Field nu;
  bool has_alpha() const { return alpha.size() > 0; }
};

DiracMomentum jl(const CotangentState& z);
double jl_eval(const DiracMomentum& m, const LeftAlgebraElement& xi);
RightMomentum jr(const CotangentState& z);
// Integral of alpha v + <nu, zeta> over S.
double jr_eval(const SourceManifold& s, const RightMomentum& m, const RightAlgebraElement& xi);
double generic_momentum_eval(const CotangentState& z, const StateTangent& generator);

// On S^1 the class of alpha modulo exact forms is fixed by its integral, so the
// class distance compares integrals of alpha and the full nu.
double class_distance(const SourceManifold& s, const RightMomentum& a, const RightMomentum& b);
double full_distance(const RightMomentum& a, const RightMomentum& b);

// Rows: test functionals; columns: StateLayout coordinates.
Eigen::MatrixXd djl(const CotangentState& z, const std::vector<LeftAlgebraElement>& basis);
// Rows: alpha_i (grid only) then nu_{i,a}.
Eigen::MatrixXd djr(const CotangentState& z);
// Rows: the functionals jr_eval(., xi) for each right direction xi.
Eigen::MatrixXd djr(const CotangentState& z, const std::vector<RightAlgebraElement>& directions);

// CSV columns: i, Q_1..Q_d, wP_1..wP_d, wsigma_1..wsigma_m
void write_csv(std::ostream& out, const DiracMomentum& m);
// CSV columns: i, x, alpha (blank on point clouds), nu_1..nu_m
void write_csv(std::ostream& out, const SourceManifold& s, const RightMomentum& m);

}  // namespace epaut
