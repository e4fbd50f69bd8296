#include "epaut/momentum_maps.hpp"

#include <cmath>

namespace epaut {

DiracMomentum jl(const CotangentState& z) {
  DiracMomentum m{z.Q, z.P, z.sigma};
  for (int i = 0; i < z.nodes(); ++i) {
    m.weighted_p.row(i) *= z.source.weights()(i);
    m.weighted_sigma.row(i) *= z.source.weights()(i);
  }
  return m;
}

double jl_eval(const DiracMomentum& m, const LeftAlgebraElement& xi) {
  double acc = 0.0;
  for (int i = 0; i < m.points.rows(); ++i) {
    const Eigen::VectorXd q = m.points.row(i).transpose();
    acc += m.weighted_p.row(i).dot(xi.u.value(q)) + m.weighted_sigma.row(i).dot(xi.nu.value(q));
  }
  return acc;
}

RightMomentum jr(const CotangentState& z) {
  RightMomentum m;
  m.nu.resize(z.nodes(), z.group.dim());
  for (int i = 0; i < z.nodes(); ++i)
    m.nu.row(i) = z.group.coAd(z.gamma[i], z.sigma.row(i).transpose()).transpose();
  if (!z.source.is_grid()) return m;
  const Field dq = z.ambient.curve_derivative(z.source, z.Q);
  const Field r = logderiv_right(z.source, z.group, z.gamma);
  m.alpha = (z.P.cwiseProduct(dq).rowwise().sum() + z.sigma.cwiseProduct(r).rowwise().sum());
  return m;
}

double jr_eval(const SourceManifold& s, const RightMomentum& m, const RightAlgebraElement& xi) {
  Eigen::VectorXd density = m.nu.cwiseProduct(xi.zeta).rowwise().sum();
  if (m.has_alpha() && xi.v.size() > 0) density += m.alpha.cwiseProduct(xi.v);
  return quadrature(s, density);
}

double generic_momentum_eval(const CotangentState& z, const StateTangent& generator) {
  return pairing(z, generator);
}

double class_distance(const SourceManifold& s, const RightMomentum& a, const RightMomentum& b) {
  double d = (a.nu - b.nu).cwiseAbs().maxCoeff();
  if (a.has_alpha() && b.has_alpha())
    d = std::max(d, std::abs(quadrature(s, a.alpha - b.alpha)) / s.total_volume());
  return d;
}

double full_distance(const RightMomentum& a, const RightMomentum& b) {
  double d = (a.nu - b.nu).cwiseAbs().maxCoeff();
  if (a.has_alpha() && b.has_alpha()) d = std::max(d, (a.alpha - b.alpha).cwiseAbs().maxCoeff());
  return d;
}

Eigen::MatrixXd djl(const CotangentState& z, const std::vector<LeftAlgebraElement>& basis) {
  const StateLayout lay(z);
  const int d = lay.d(), m = lay.m();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()), lay.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (int i = 0; i < z.nodes(); ++i) {
      const double w = z.source.weights()(i);
      const Eigen::VectorXd q = z.Q.row(i).transpose();
      Eigen::VectorXd u, nu;
      Eigen::MatrixXd du, dnu;
      basis[r].u.evaluate(q, u, du);
      basis[r].nu.evaluate(q, nu, dnu);
      const Eigen::VectorXd gq =
          du.transpose() * z.P.row(i).transpose() + dnu.transpose() * z.sigma.row(i).transpose();
      for (int k = 0; k < d; ++k) {
        jac(r, lay.q(i, k)) = w * gq(k);
        jac(r, lay.p(i, k)) = w * u(k);
      }
      for (int a = 0; a < m; ++a) jac(r, lay.sigma(i, a)) = w * nu(a);
    }
  }
  return jac;
}

Eigen::MatrixXd djr(const CotangentState& z) {
  const StateLayout lay(z);
  const int n = z.nodes(), d = lay.d(), m = lay.m();
  const bool grid = z.source.is_grid();
  const int alpha_rows = grid ? n : 0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(alpha_rows + n * m, lay.size());
  if (grid) {
    const Eigen::MatrixXd dm = derivative_matrix(z.source);
    const Field dq = z.ambient.curve_derivative(z.source, z.Q);
    const Field r = logderiv_right(z.source, z.group, z.gamma);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd s = z.sigma.row(i).transpose();
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < d; ++k) jac(i, lay.q(j, k)) = z.P(i, k) * dm(i, j);
      if (z.group.kind() == GroupKind::circle) {
        for (int j = 0; j < n; ++j) jac(i, lay.eta(j, 0)) = s(0) * dm(i, j);
      } else {
        // linearization of the discrete log-derivative vee(sum_j D_ij g_j g_i^T)
        const Eigen::Vector3d s3 = s;
        const Eigen::Matrix3d gi = z.gamma[i].rotation().transpose();
        for (int j = 0; j < n; ++j) {
          if (dm(i, j) == 0.0) continue;
          const Eigen::Matrix3d mij = z.gamma[j].rotation() * gi;
          for (int b = 0; b < 3; ++b) {
            const Eigen::Matrix3d eb = hat(Eigen::Vector3d::Unit(b));
            jac(i, lay.eta(j, b)) += dm(i, j) * s3.dot(vee(eb * mij));
            jac(i, lay.eta(i, b)) -= dm(i, j) * s3.dot(vee(mij * eb));
          }
        }
      }
      for (int a = 0; a < m; ++a) jac(i, lay.sigma(i, a)) = r(i, a);
      for (int k = 0; k < d; ++k) jac(i, lay.p(i, k)) = dq(i, k);
    }
  }
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd co = z.group.Ad_matrix(z.gamma[i]).transpose();
    const Eigen::MatrixXd ce = co * z.group.coad_matrix(z.sigma.row(i).transpose());
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        jac(alpha_rows + i * m + a, lay.sigma(i, b)) = co(a, b);
        jac(alpha_rows + i * m + a, lay.eta(i, b)) = ce(a, b);
      }
  }
  return jac;
}

Eigen::MatrixXd djr(const CotangentState& z, const std::vector<RightAlgebraElement>& directions) {
  const Eigen::MatrixXd full = djr(z);
  const int n = z.nodes(), m = z.group.dim();
  const bool grid = z.source.is_grid();
  const int alpha_rows = grid ? n : 0;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(directions.size()), full.rows());
  for (std::size_t r = 0; r < directions.size(); ++r) {
    for (int i = 0; i < n; ++i) {
      const double w = z.source.weights()(i);
      if (grid && directions[r].v.size() > 0) weights(r, i) = w * directions[r].v(i);
      for (int a = 0; a < m; ++a) weights(r, alpha_rows + i * m + a) = w * directions[r].zeta(i, a);
    }
  }
  return weights * full;
}

void write_csv(std::ostream& out, const DiracMomentum& m) {
  const int d = static_cast<int>(m.points.cols()), dm = static_cast<int>(m.weighted_sigma.cols());
  out << "i";
  for (int k = 0; k < d; ++k) out << ",Q_" << k + 1;
  for (int k = 0; k < d; ++k) out << ",wP_" << k + 1;
  for (int a = 0; a < dm; ++a) out << ",wsigma_" << a + 1;
  out << "\n";
  out.precision(17);
  for (int i = 0; i < m.points.rows(); ++i) {
    out << i;
    for (int k = 0; k < d; ++k) out << "," << m.points(i, k);
    for (int k = 0; k < d; ++k) out << "," << m.weighted_p(i, k);
    for (int a = 0; a < dm; ++a) out << "," << m.weighted_sigma(i, a);
    out << "\n";
  }
}

void write_csv(std::ostream& out, const SourceManifold& s, const RightMomentum& m) {
  const int dm = static_cast<int>(m.nu.cols());
  out << "i,x,alpha";
  for (int a = 0; a < dm; ++a) out << ",nu_" << a + 1;
  out << "\n";
  out.precision(17);
  for (int i = 0; i < s.size(); ++i) {
    out << i << "," << s.nodes()(i) << ",";
    if (m.has_alpha()) out << m.alpha(i);
    for (int a = 0; a < dm; ++a) out << "," << m.nu(i, a);
    out << "\n";
  }
}

}  // namespace epaut
