#pragma once

#include <functional>

#include <Eigen/Dense>

#include "epaut/ambient.hpp"
#include "epaut/lie_group.hpp"
#include "epaut/source_grid.hpp"

namespace epaut {

// Everything a left transformer (phi, a) provides at one point of M.
struct LeftEvaluation {
  Eigen::VectorXd phi;
  Eigen::MatrixXd dphi;
  GroupElement a;
  Eigen::MatrixXd dlog_a;  // right log-derivative (da)a^{-1}, dim_o x d
};

// Automorphism (phi, a) of the trivial bundle M x O.
class LeftTransformer {
 public:
  using Evaluator = std::function<LeftEvaluation(const Eigen::VectorXd&)>;
  using PointMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  // Checks the supplied derivatives against central differences at `probes`
  // and throws if the relative residual exceeds 1e-6.
  LeftTransformer(AmbientManifold m, StructureGroup grp, Evaluator eval, PointMap inverse_point,
                  const std::vector<Eigen::VectorXd>& probes = {});

  static LeftTransformer identity(const AmbientManifold& m, const StructureGroup& grp);
  static LeftTransformer translation(const AmbientManifold& m, const StructureGroup& grp,
                                     const Eigen::VectorXd& offset);
  // x -> A x + b on Euclidean space.
  static LeftTransformer linear(const AmbientManifold& m, const StructureGroup& grp,
                                const Eigen::MatrixXd& a, const Eigen::VectorXd& b);
  static LeftTransformer constant_gauge(const AmbientManifold& m, const StructureGroup& grp,
                                        const GroupElement& g);
  // phi = id, a(x) = exp(f(x)) for an o-valued field f.
  static LeftTransformer exp_gauge(const AmbientManifold& m, const StructureGroup& grp,
                                   const AmbientField& f);
  // Time-t element of the one-parameter subgroup generated by xi, integrated with
  // dense output together with its variational equations.
  static LeftTransformer flow(const AmbientManifold& m, const StructureGroup& grp,
                              const LeftAlgebraElement& xi, double t);

  const AmbientManifold& ambient() const { return m_; }
  const StructureGroup& group() const { return grp_; }
  LeftEvaluation evaluate(const Eigen::VectorXd& x) const { return eval_(x); }
  Eigen::VectorXd phi(const Eigen::VectorXd& x) const { return eval_(x).phi; }
  Eigen::VectorXd phi_inverse(const Eigen::VectorXd& y) const { return inverse_point_(y); }
  GroupElement gauge(const Eigen::VectorXd& x) const { return eval_(x).a; }
  // Applies the automorphism to (x, g): (phi(x), a(x) g).
  std::pair<Eigen::VectorXd, GroupElement> apply(const Eigen::VectorXd& x,
                                                 const GroupElement& g) const;

  // Largest relative finite-difference residual of dphi and dlog_a at the probes.
  double consistency_residual(const std::vector<Eigen::VectorXd>& probes, double h = 1e-5) const;

 private:
  AmbientManifold m_;
  StructureGroup grp_;
  Evaluator eval_;
  PointMap inverse_point_;
};

// (phi1 o phi2, (a1 o phi2) a2)
LeftTransformer semidirect_compose(const LeftTransformer& t1, const LeftTransformer& t2);
// (phi^{-1}, a^{-1} o phi^{-1})
LeftTransformer semidirect_inverse(const LeftTransformer& t);

struct RightTransformer {
  GridDiffeo psi;
  GroupField b;
};

struct RightAlgebraElement {
  Eigen::VectorXd v;  // vector field on S^1
  Field zeta;         // o-valued, one row per node
};

}  // namespace epaut
