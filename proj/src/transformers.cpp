#include "epaut/transformers.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>

namespace epaut {

namespace {

std::vector<Eigen::VectorXd> default_probes(int d) {
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(Eigen::VectorXd::Constant(d, 0.1));
  Eigen::VectorXd p(d);
  for (int k = 0; k < d; ++k) p(k) = (k % 2 == 0 ? 0.4 : -0.3) + 0.05 * k;
  probes.push_back(p);
  return probes;
}


}  // namespace

LeftTransformer::LeftTransformer(AmbientManifold m, StructureGroup grp, Evaluator eval,
                                 PointMap inverse_point,
                                 const std::vector<Eigen::VectorXd>& probes)
    : m_(m), grp_(grp), eval_(std::move(eval)), inverse_point_(std::move(inverse_point)) {
  if (!probes.empty()) {
    const double r = consistency_residual(probes);
    if (!(r < 1e-6))
      throw Error("LeftTransformer: derivative consistency residual " + std::to_string(r));
  }
}

double LeftTransformer::consistency_residual(const std::vector<Eigen::VectorXd>& probes,
                                             double h) const {
  double worst = 0.0;
  for (const auto& x : probes) {
    const LeftEvaluation e = eval_(x);
    const int d = static_cast<int>(x.size());
    Eigen::MatrixXd dphi_fd(d, d), dlog_fd(grp_.dim(), d);
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      const LeftEvaluation ep = eval_(xp), em = eval_(xm);
      dphi_fd.col(k) = m_.displacement(em.phi, ep.phi) / (2 * h);
      dlog_fd.col(k) = grp_.log(ep.a * em.a.inverse()) / (2 * h);
    }
    const double sp = std::max(1.0, e.dphi.norm());
    const double sa = std::max(1.0, e.dlog_a.norm());
    worst = std::max(worst, (dphi_fd - e.dphi).norm() / sp);
    worst = std::max(worst, (dlog_fd - e.dlog_a).norm() / sa);
    // Inverse point map round trip.
    worst = std::max(worst, m_.distance(inverse_point_(e.phi), x));
  }
  return worst;
}

std::pair<Eigen::VectorXd, GroupElement> LeftTransformer::apply(const Eigen::VectorXd& x,
                                                                const GroupElement& g) const {
  const LeftEvaluation e = eval_(x);
  return {e.phi, e.a * g};
}

LeftTransformer LeftTransformer::identity(const AmbientManifold& m, const StructureGroup& grp) {
  const int d = m.dim(), dm = grp.dim();
  return LeftTransformer(
      m, grp,
      [=](const Eigen::VectorXd& x) {
        return LeftEvaluation{x, Eigen::MatrixXd::Identity(d, d), grp.identity(),
                              Eigen::MatrixXd::Zero(dm, d)};
      },
      [](const Eigen::VectorXd& y) { return y; });
}

LeftTransformer LeftTransformer::translation(const AmbientManifold& m, const StructureGroup& grp,
                                             const Eigen::VectorXd& offset) {
  const int d = m.dim(), dm = grp.dim();
  return LeftTransformer(
      m, grp,
      [=](const Eigen::VectorXd& x) {
        return LeftEvaluation{x + offset, Eigen::MatrixXd::Identity(d, d), grp.identity(),
                              Eigen::MatrixXd::Zero(dm, d)};
      },
      [=](const Eigen::VectorXd& y) { Eigen::VectorXd x = y - offset; return x; });
}

LeftTransformer LeftTransformer::linear(const AmbientManifold& m, const StructureGroup& grp,
                                        const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (m.kind() != AmbientKind::euclidean) throw Error("linear transformer needs Euclidean M");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error("linear transformer: matrix is singular");
  const Eigen::MatrixXd ainv = lu.inverse();
  const int d = m.dim(), dm = grp.dim();
  return LeftTransformer(
      m, grp,
      [=](const Eigen::VectorXd& x) {
        return LeftEvaluation{a * x + b, a, grp.identity(), Eigen::MatrixXd::Zero(dm, d)};
      },
      [=](const Eigen::VectorXd& y) { Eigen::VectorXd x = ainv * (y - b); return x; });
}

LeftTransformer LeftTransformer::constant_gauge(const AmbientManifold& m,
                                                const StructureGroup& grp,
                                                const GroupElement& g) {
  const int d = m.dim(), dm = grp.dim();
  return LeftTransformer(
      m, grp,
      [=](const Eigen::VectorXd& x) {
        return LeftEvaluation{x, Eigen::MatrixXd::Identity(d, d), g,
                              Eigen::MatrixXd::Zero(dm, d)};
      },
      [](const Eigen::VectorXd& y) { return y; });
}

LeftTransformer LeftTransformer::exp_gauge(const AmbientManifold& m, const StructureGroup& grp,
                                           const AmbientField& f) {
  const int d = m.dim();
  return LeftTransformer(
      m, grp,
      [=](const Eigen::VectorXd& x) {
        Eigen::VectorXd v;
        Eigen::MatrixXd j;
        f.evaluate(x, v, j);
        return LeftEvaluation{x, Eigen::MatrixXd::Identity(d, d), grp.exp(v),
                              grp.dexp(v) * j};
      },
      [](const Eigen::VectorXd& y) { return y; }, default_probes(d));
}

namespace {

using OdeState = std::vector<double>;

// Integrates the flow of xi for time t from x; also the variational equations.
LeftEvaluation integrate_flow(const AmbientManifold& m, const StructureGroup& grp,
                              const LeftAlgebraElement& xi, double t, const Eigen::VectorXd& x0) {
  namespace ode = boost::numeric::odeint;
  const int d = m.dim(), dm = grp.dim();
  const int na = grp.kind() == GroupKind::circle ? 1 : 9;
  const int n = d + d * d + dm * d + na;
  OdeState s(n, 0.0);
  for (int k = 0; k < d; ++k) {
    s[k] = x0(k);
    s[d + k * d + k] = 1.0;
  }
  if (grp.kind() == GroupKind::rotation3) {
    for (int k = 0; k < 3; ++k) s[n - 9 + 4 * k] = 1.0;
  }
  auto rhs = [&](const OdeState& y, OdeState& dy, double) {
    const Eigen::Map<const Eigen::VectorXd> phi(y.data(), d);
    const Eigen::Map<const Eigen::MatrixXd> dphi(y.data() + d, d, d);
    const Eigen::Map<const Eigen::MatrixXd> r(y.data() + d + d * d, dm, d);
    Eigen::VectorXd u, nu;
    Eigen::MatrixXd du, dnu;
    xi.u.evaluate(phi, u, du);
    xi.nu.evaluate(phi, nu, dnu);
    Eigen::Map<Eigen::VectorXd> dphi_dt(dy.data(), d);
    Eigen::Map<Eigen::MatrixXd> ddphi_dt(dy.data() + d, d, d);
    Eigen::Map<Eigen::MatrixXd> dr_dt(dy.data() + d + d * d, dm, d);
    dphi_dt = t * u;
    ddphi_dt = t * du * dphi;
    dr_dt = t * (dnu * dphi + grp.ad_matrix(nu) * r);
    if (grp.kind() == GroupKind::circle) {
      dy[n - 1] = t * nu(0);
    } else {
      const Eigen::Map<const Eigen::Matrix3d> a(y.data() + n - 9);
      Eigen::Map<Eigen::Matrix3d> da(dy.data() + n - 9);
      da = t * hat(Eigen::Vector3d(nu(0), nu(1), nu(2))) * a;
    }
  };
  auto stepper = ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<OdeState>());
  ode::integrate_adaptive(stepper, rhs, s, 0.0, 1.0, 0.05);
  LeftEvaluation e;
  e.phi = Eigen::Map<const Eigen::VectorXd>(s.data(), d);
  e.dphi = Eigen::Map<const Eigen::MatrixXd>(s.data() + d, d, d);
  e.dlog_a = Eigen::Map<const Eigen::MatrixXd>(s.data() + d + d * d, dm, d);
  if (grp.kind() == GroupKind::circle) {
    e.a = GroupElement::from_angle(s[n - 1]);
  } else {
    e.a = GroupElement::from_rotation(
        nearest_rotation(Eigen::Map<const Eigen::Matrix3d>(s.data() + n - 9)));
  }
  return e;
}

}  // namespace

LeftTransformer LeftTransformer::flow(const AmbientManifold& m, const StructureGroup& grp,
                                      const LeftAlgebraElement& xi, double t) {
  LeftAlgebraElement point_only{xi.u, AmbientField::zero(m.dim(), grp.dim())};
  return LeftTransformer(
      m, grp, [=](const Eigen::VectorXd& x) { return integrate_flow(m, grp, xi, t, x); },
      [=](const Eigen::VectorXd& y) { return integrate_flow(m, grp, point_only, -t, y).phi; },
      default_probes(m.dim()));
}

LeftTransformer semidirect_compose(const LeftTransformer& t1, const LeftTransformer& t2) {
  const StructureGroup grp = t1.group();
  return LeftTransformer(
      t1.ambient(), grp,
      [=](const Eigen::VectorXd& x) {
        const LeftEvaluation e2 = t2.evaluate(x);
        const LeftEvaluation e1 = t1.evaluate(e2.phi);
        LeftEvaluation e;
        e.phi = e1.phi;
        e.dphi = e1.dphi * e2.dphi;
        e.a = e1.a * e2.a;
        e.dlog_a = e1.dlog_a * e2.dphi + grp.Ad_matrix(e1.a) * e2.dlog_a;
        return e;
      },
      [=](const Eigen::VectorXd& y) { return t2.phi_inverse(t1.phi_inverse(y)); });
}

LeftTransformer semidirect_inverse(const LeftTransformer& t) {
  const StructureGroup grp = t.group();
  return LeftTransformer(
      t.ambient(), grp,
      [=](const Eigen::VectorXd& y) {
        const Eigen::VectorXd x = t.phi_inverse(y);
        const LeftEvaluation ex = t.evaluate(x);
        LeftEvaluation e;
        e.phi = x;
        e.dphi = ex.dphi.inverse();
        e.a = ex.a.inverse();
        e.dlog_a = -grp.Ad_matrix(e.a) * ex.dlog_a * e.dphi;
        return e;
      },
      [=](const Eigen::VectorXd& x) { return t.phi(x); });
}

}  // namespace epaut
