#include "epaut/dual_pair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace epaut {

std::vector<RightAlgebraElement> right_basis(const SourceManifold& s, const StructureGroup& grp,
                                             int kr) {
  std::vector<Eigen::VectorXd> scalars;
  scalars.push_back(Eigen::VectorXd::Ones(s.size()));
  for (int k = 1; k <= kr; ++k) {
    scalars.push_back((k * s.nodes().array()).cos().matrix());
    scalars.push_back((k * s.nodes().array()).sin().matrix());
  }
  std::vector<RightAlgebraElement> out;
  const int n = s.size(), m = grp.dim();
  for (const auto& f : scalars) out.push_back({f, Field::Zero(n, m)});
  for (const auto& f : scalars)
    for (int a = 0; a < m; ++a) {
      Field zeta = Field::Zero(n, m);
      zeta.col(a) = f;
      out.push_back({Eigen::VectorXd::Zero(n), zeta});
    }
  return out;
}

GeneratorBasis left_generator_basis(const CotangentState& z,
                                    const std::vector<LeftAlgebraElement>& basis) {
  const StateLayout lay(z);
  GeneratorBasis g{Eigen::MatrixXd(lay.size(), static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t j = 0; j < basis.size(); ++j)
    g.columns.col(j) = lay.flatten(cotangent_generator_left(basis[j], z));
  return g;
}

GeneratorBasis right_generator_basis(const CotangentState& z,
                                     const std::vector<RightAlgebraElement>& basis) {
  const StateLayout lay(z);
  GeneratorBasis g{Eigen::MatrixXd(lay.size(), static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t j = 0; j < basis.size(); ++j)
    g.columns.col(j) = lay.flatten(cotangent_generator_right(basis[j], z));
  return g;
}

double orthogonality_residual(const GeneratorBasis& a, const GeneratorBasis& b,
                              const Eigen::MatrixXd& omega) {
  if (a.count() == 0 || b.count() == 0) return 0.0;
  const Eigen::MatrixXd oa = omega.transpose() * a.columns;  // columns: Omega^T a_i
  const Eigen::MatrixXd prod = oa.transpose() * b.columns;   // a_i^T Omega b_j
  double worst = 0.0;
  for (int i = 0; i < a.count(); ++i) {
    const double na = oa.col(i).norm();
    if (na == 0.0) continue;
    for (int j = 0; j < b.count(); ++j) {
      const double nb = b.columns.col(j).norm();
      if (nb == 0.0) continue;
      worst = std::max(worst, std::abs(prod(i, j)) / (na * nb));
    }
  }
  return worst;
}

SubspaceReport compare_subspaces(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& orbit,
                                 double rank_tol) {
  SubspaceReport r;
  const int n = static_cast<int>(jacobian.cols());
  r.state_dim = n;
  // Full V from the SVD of J^T J-sized problem: pad rows so V is n x n.
  Eigen::MatrixXd jpad = Eigen::MatrixXd::Zero(std::max<Eigen::Index>(jacobian.rows(), n), n);
  jpad.topRows(jacobian.rows()) = jacobian;
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(jpad, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  r.jacobian_rank = static_cast<int>((s.array() > rank_tol * smax).count());
  r.kernel_dim = n - r.jacobian_rank;
  const Eigen::MatrixXd ker = svd.matrixV().rightCols(r.kernel_dim);

  for (int j = 0; j < orbit.cols(); ++j) {
    const double nb = orbit.col(j).norm();
    if (nb == 0.0 || smax == 0.0) continue;
    r.inclusion_residual = std::max(r.inclusion_residual, (jacobian * orbit.col(j)).norm() / (smax * nb));
  }

  if (orbit.cols() == 0) {
    r.orbit_rank = 0;
  } else {
    const Eigen::BDCSVD<Eigen::MatrixXd> osvd(orbit, Eigen::ComputeThinU);
    const Eigen::VectorXd os = osvd.singularValues();
    r.orbit_rank = os(0) > 0 ? static_cast<int>((os.array() > rank_tol * os(0)).count()) : 0;
    const Eigen::MatrixXd uo = osvd.matrixU().leftCols(r.orbit_rank);
    const Eigen::MatrixXd cross = ker.transpose() * uo;
    if (cross.size() > 0) {
      const Eigen::BDCSVD<Eigen::MatrixXd> csvd(cross);
      r.cosines = csvd.singularValues().cwiseMin(1.0);
    }
    r.uncovered_dimension = r.kernel_dim - cross.squaredNorm();
  }
  if (r.orbit_rank == 0) r.uncovered_dimension = r.kernel_dim;
  r.excess = r.kernel_dim - r.orbit_rank;
  r.largest_angle = r.cosines.size() > 0 ? std::acos(r.cosines.minCoeff())
                                          : (r.kernel_dim > 0 ? std::numbers::pi / 2 : 0.0);
  return r;
}

SubspaceReport kernel_vs_orbit(const CotangentState& z, const Eigen::MatrixXd& jacobian,
                               const GeneratorBasis& orbit, double eps_reg, double rank_tol) {
  if (!is_regular(z, eps_reg))
    throw NotRegular("state has a node where P and sigma both vanish");
  return compare_subspaces(jacobian, orbit.columns, rank_tol);
}

}  // namespace epaut
