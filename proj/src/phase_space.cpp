#include "epaut/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epaut {

Eigen::VectorXd StateLayout::flatten(const StateTangent& t) const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < d_; ++k) {
      v(q(i, k)) = t.dQ(i, k);
      v(p(i, k)) = t.dP(i, k);
    }
    for (int a = 0; a < m_; ++a) {
      v(eta(i, a)) = t.eta(i, a);
      v(sigma(i, a)) = t.dsigma(i, a);
    }
  }
  return v;
}

StateTangent StateLayout::unflatten(const Eigen::VectorXd& v) const {
  StateTangent t{Field(n_, d_), Field(n_, d_), Field(n_, m_), Field(n_, m_)};
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < d_; ++k) {
      t.dQ(i, k) = v(q(i, k));
      t.dP(i, k) = v(p(i, k));
    }
    for (int a = 0; a < m_; ++a) {
      t.eta(i, a) = v(eta(i, a));
      t.dsigma(i, a) = v(sigma(i, a));
    }
  }
  return t;
}

StateTangent zero_tangent(const CotangentState& z) {
  const int n = z.nodes(), d = z.ambient.dim(), m = z.group.dim();
  return {Field::Zero(n, d), Field::Zero(n, d), Field::Zero(n, m), Field::Zero(n, m)};
}

CotangentState perturb(const CotangentState& z, const StateTangent& v, double eps) {
  CotangentState out = z;
  out.Q += eps * v.dQ;
  out.P += eps * v.dP;
  out.sigma += eps * v.dsigma;
  for (int i = 0; i < z.nodes(); ++i)
    out.gamma[i] = z.group.exp(eps * v.eta.row(i).transpose()) * z.gamma[i];
  return out;
}

StateTangent central_difference(const CotangentState& plus, const CotangentState& minus,
                                double eps) {
  StateTangent out = zero_tangent(plus);
  for (int i = 0; i < plus.nodes(); ++i) {
    out.dQ.row(i) = plus.ambient
                        .displacement(minus.Q.row(i).transpose(), plus.Q.row(i).transpose())
                        .transpose() /
                    (2 * eps);
    out.eta.row(i) =
        plus.group.log(plus.gamma[i] * minus.gamma[i].inverse()).transpose() / (2 * eps);
  }
  out.dP = (plus.P - minus.P) / (2 * eps);
  out.dsigma = (plus.sigma - minus.sigma) / (2 * eps);
  return out;
}

double max_abs(const StateTangent& v) {
  return std::max({v.dQ.cwiseAbs().maxCoeff(), v.dP.cwiseAbs().maxCoeff(),
                   v.eta.cwiseAbs().maxCoeff(), v.dsigma.cwiseAbs().maxCoeff()});
}

StateTangent operator-(const StateTangent& a, const StateTangent& b) {
  return {a.dQ - b.dQ, a.dP - b.dP, a.eta - b.eta, a.dsigma - b.dsigma};
}

double regularity_margin(const CotangentState& z) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < z.nodes(); ++i)
    m = std::min(m, std::sqrt(z.P.row(i).squaredNorm() + z.sigma.row(i).squaredNorm()));
  return m;
}

bool is_regular(const CotangentState& z, double eps_reg) {
  return regularity_margin(z) >= eps_reg;
}

double embedding_margin(const CotangentState& z) {
  const int n = z.nodes();
  const double two_pi = 2.0 * std::numbers::pi;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dx = std::abs(z.source.nodes()(i) - z.source.nodes()(j));
      if (z.source.is_grid()) dx = std::min(dx, two_pi - dx);
      const double dq = z.ambient.distance(z.Q.row(i).transpose(), z.Q.row(j).transpose());
      m = std::min(m, dx > 0 ? dq / dx : dq);
    }
  }
  return m;
}

BasePoint act_left(const LeftTransformer& t, const Field& q, const GroupField& gamma) {
  BasePoint out{Field(q.rows(), q.cols()), GroupField()};
  out.gamma.reserve(gamma.size());
  for (int i = 0; i < q.rows(); ++i) {
    const auto [x, g] = t.apply(q.row(i).transpose(), gamma[i]);
    out.Q.row(i) = x.transpose();
    out.gamma.push_back(g);
  }
  return out;
}

BasePoint act_right(const SourceManifold& s, const AmbientManifold& m, const StructureGroup& grp,
                    const Field& q, const GroupField& gamma, const RightTransformer& r) {
  return {m.curve_interpolate(s, q, r.psi.lift()),
          multiply(resample(s, grp, gamma, r.psi), r.b)};
}

CotangentState coact_left(const LeftTransformer& t, const CotangentState& z) {
  CotangentState out = z;
  for (int i = 0; i < z.nodes(); ++i) {
    const LeftEvaluation e = t.evaluate(z.Q.row(i).transpose());
    const Eigen::VectorXd s = z.sigma.row(i).transpose();
    // Left log-derivative Ad_{a^{-1}} (da) a^{-1}.
    const Eigen::MatrixXd dlog_left = z.group.Ad_matrix(e.a.inverse()) * e.dlog_a;
    const Eigen::VectorXd pc = z.P.row(i).transpose() - dlog_left.transpose() * s;
    out.Q.row(i) = e.phi.transpose();
    out.P.row(i) = e.dphi.transpose().partialPivLu().solve(pc).transpose();
    out.gamma[i] = e.a * z.gamma[i];
    out.sigma.row(i) = z.group.coAd(e.a.inverse(), s).transpose();
  }
  return out;
}

CotangentState coact_right(const CotangentState& z, const RightTransformer& r) {
  CotangentState out = z;
  const Eigen::VectorXd& lift = r.psi.lift();
  const Eigen::VectorXd& jac = r.psi.jacobian();
  out.Q = z.ambient.curve_interpolate(z.source, z.Q, lift);
  out.P = interpolate(z.source, z.P, lift);
  out.sigma = interpolate(z.source, z.sigma, lift);
  for (int i = 0; i < z.nodes(); ++i) {
    out.P.row(i) *= jac(i);
    out.sigma.row(i) *= jac(i);
  }
  out.gamma = multiply(resample(z.source, z.group, z.gamma, r.psi), r.b);
  return out;
}

StateTangent tangent_lift_left(const LeftTransformer& t, const CotangentState& z,
                               const StateTangent& v) {
  StateTangent out = zero_tangent(z);
  for (int i = 0; i < z.nodes(); ++i) {
    const LeftEvaluation e = t.evaluate(z.Q.row(i).transpose());
    const Eigen::VectorXd dq = v.dQ.row(i).transpose();
    out.dQ.row(i) = (e.dphi * dq).transpose();
    out.eta.row(i) = (e.dlog_a * dq + z.group.Ad(e.a, v.eta.row(i).transpose())).transpose();
  }
  return out;
}

StateTangent tangent_lift_right(const CotangentState& z, const RightTransformer& r,
                                const StateTangent& v) {
  StateTangent out = zero_tangent(z);
  out.dQ = interpolate(z.source, v.dQ, r.psi.lift());
  out.eta = interpolate(z.source, v.eta, r.psi.lift());
  return out;
}

StateTangent generator_left(const LeftAlgebraElement& xi, const CotangentState& z) {
  StateTangent out = zero_tangent(z);
  for (int i = 0; i < z.nodes(); ++i) {
    const Eigen::VectorXd q = z.Q.row(i).transpose();
    out.dQ.row(i) = xi.u.value(q).transpose();
    out.eta.row(i) = xi.nu.value(q).transpose();
  }
  return out;
}

namespace {

bool is_zero(const Eigen::VectorXd& v) { return v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

StateTangent generator_right(const RightAlgebraElement& xi, const CotangentState& z) {
  StateTangent out = zero_tangent(z);
  for (int i = 0; i < z.nodes(); ++i)
    out.eta.row(i) = z.group.Ad(z.gamma[i], xi.zeta.row(i).transpose()).transpose();
  if (is_zero(xi.v)) return out;
  const Field dq = z.ambient.curve_derivative(z.source, z.Q);
  const Field r = logderiv_right(z.source, z.group, z.gamma);
  for (int i = 0; i < z.nodes(); ++i) {
    out.dQ.row(i) = xi.v(i) * dq.row(i);
    out.eta.row(i) += xi.v(i) * r.row(i);
  }
  return out;
}

StateTangent cotangent_generator_left(const LeftAlgebraElement& xi, const CotangentState& z) {
  StateTangent out = zero_tangent(z);
  for (int i = 0; i < z.nodes(); ++i) {
    const Eigen::VectorXd q = z.Q.row(i).transpose();
    const Eigen::VectorXd s = z.sigma.row(i).transpose();
    Eigen::VectorXd u, nu;
    Eigen::MatrixXd du, dnu;
    xi.u.evaluate(q, u, du);
    xi.nu.evaluate(q, nu, dnu);
    out.dQ.row(i) = u.transpose();
    out.dP.row(i) = (-du.transpose() * z.P.row(i).transpose() - dnu.transpose() * s).transpose();
    out.eta.row(i) = nu.transpose();
    out.dsigma.row(i) = -z.group.coad(nu, s).transpose();
  }
  return out;
}

StateTangent cotangent_generator_right(const RightAlgebraElement& xi, const CotangentState& z) {
  StateTangent out = generator_right(xi, z);
  if (is_zero(xi.v)) return out;
  const Field dp = derivative(z.source, z.P);
  const Field ds = derivative(z.source, z.sigma);
  const Eigen::VectorXd dv = derivative(z.source, xi.v).col(0);
  for (int i = 0; i < z.nodes(); ++i) {
    out.dP.row(i) = xi.v(i) * dp.row(i) + dv(i) * z.P.row(i);
    out.dsigma.row(i) = xi.v(i) * ds.row(i) + dv(i) * z.sigma.row(i);
  }
  return out;
}

double pairing(const CotangentState& z, const StateTangent& v) {
  double acc = 0.0;
  for (int i = 0; i < z.nodes(); ++i)
    acc += z.source.weights()(i) *
           (z.P.row(i).dot(v.dQ.row(i)) + z.sigma.row(i).dot(v.eta.row(i)));
  return acc;
}

}  // namespace epaut
