#pragma once

#include <Eigen/Dense>

#include "epaut/ambient.hpp"
#include "epaut/lie_group.hpp"
#include "epaut/source_grid.hpp"
#include "epaut/transformers.hpp"

namespace epaut {

// Point of the cotangent bundle of Emb(S, M) x F(S, O) in right-trivialized
// coordinates; sigma = kappa gamma^{-1}.
struct CotangentState {
  SourceManifold source;
  AmbientManifold ambient;
  StructureGroup group;
  Field Q;
  Field P;
  GroupField gamma;
  Field sigma;

  int nodes() const { return source.size(); }
};

// Tangent vector with the gamma component stored as eta = (d gamma) gamma^{-1}.
struct StateTangent {
  Field dQ;
  Field dP;
  Field eta;
  Field dsigma;
};

struct BasePoint {
  Field Q;
  GroupField gamma;
};

// Flat coordinate layout [Q | P | eta | sigma], node-major inside each block.
class StateLayout {
 public:
  StateLayout(int n, int d, int m) : n_(n), d_(d), m_(m) {}
  explicit StateLayout(const CotangentState& z)
      : StateLayout(z.nodes(), z.ambient.dim(), z.group.dim()) {}
  int size() const { return n_ * (2 * d_ + 2 * m_); }
  int q(int i, int k) const { return i * d_ + k; }
  int p(int i, int k) const { return n_ * d_ + i * d_ + k; }
  int eta(int i, int a) const { return 2 * n_ * d_ + i * m_ + a; }
  int sigma(int i, int a) const { return 2 * n_ * d_ + n_ * m_ + i * m_ + a; }
  int nodes() const { return n_; }
  int d() const { return d_; }
  int m() const { return m_; }

  Eigen::VectorXd flatten(const StateTangent& t) const;
  StateTangent unflatten(const Eigen::VectorXd& v) const;

 private:
  int n_, d_, m_;
};

StateTangent zero_tangent(const CotangentState& z);
// Moves z along v: Q + eps dQ, P + eps dP, exp(eps eta) gamma, sigma + eps dsigma.
CotangentState perturb(const CotangentState& z, const StateTangent& v, double eps);
// (plus - minus) / (2 eps) with eta = log(gamma_plus gamma_minus^{-1}) / (2 eps).
StateTangent central_difference(const CotangentState& plus, const CotangentState& minus,
                                double eps);
double max_abs(const StateTangent& v);
StateTangent operator-(const StateTangent& a, const StateTangent& b);

// min_i sqrt(|P_i|^2 + |sigma_i|^2)
double regularity_margin(const CotangentState& z);
bool is_regular(const CotangentState& z, double eps_reg = 1e-8);
// min_{i != j} dist(Q_i, Q_j) / |x_i - x_j|
double embedding_margin(const CotangentState& z);

BasePoint act_left(const LeftTransformer& t, const Field& q, const GroupField& gamma);
BasePoint act_right(const SourceManifold& s, const AmbientManifold& m, const StructureGroup& grp,
                    const Field& q, const GroupField& gamma, const RightTransformer& r);
CotangentState coact_left(const LeftTransformer& t, const CotangentState& z);
CotangentState coact_right(const CotangentState& z, const RightTransformer& r);

// Tangent lifts of the base actions (only dQ and eta are transported).
StateTangent tangent_lift_left(const LeftTransformer& t, const CotangentState& z,
                               const StateTangent& v);
StateTangent tangent_lift_right(const CotangentState& z, const RightTransformer& r,
                                const StateTangent& v);

// Base generators: dP and dsigma are zero.
StateTangent generator_left(const LeftAlgebraElement& xi, const CotangentState& z);
StateTangent generator_right(const RightAlgebraElement& xi, const CotangentState& z);
// Generators of the cotangent-lifted actions, including the momentum components.
StateTangent cotangent_generator_left(const LeftAlgebraElement& xi, const CotangentState& z);
StateTangent cotangent_generator_right(const RightAlgebraElement& xi, const CotangentState& z);

// Sum_i w_i (P_i . dQ_i + <sigma_i, eta_i>)
double pairing(const CotangentState& z, const StateTangent& v);

}  // namespace epaut
