#include "epaut/yang_mills.hpp"

#include <cmath>
#include <limits>

#include "epaut/errors.hpp"
#include "epaut/random.hpp"

namespace epaut {

double vol_embedding_margin(const VolState& z) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < z.nodes(); ++i)
    for (int j = i + 1; j < z.nodes(); ++j) {
      const Eigen::VectorXd dq =
          z.ambient.displacement(z.Q.row(i).transpose(), z.Q.row(j).transpose());
      const double d2 = dq.squaredNorm() + (z.P.row(i) - z.P.row(j)).squaredNorm() +
                        (z.sigma.row(i) - z.sigma.row(j)).squaredNorm();
      best = std::min(best, std::sqrt(d2));
    }
  return best;
}

void validate_vol_state(const VolState& z, double eps_emb) {
  if (!z.source.is_grid()) throw Error("VolState: source must be a periodic grid");
  if (z.ambient.kind() != AmbientKind::torus) throw Error("VolState: ambient must be a flat torus");
  if (vol_embedding_margin(z) < eps_emb) throw Error("VolState: (q, p, sigma) is not an embedding");
}

VolState random_vol_state(int n, int d, const StructureGroup& grp, CounterRng& rng,
                          double wobble) {
  StateSampler opts;
  opts.nodes = n;
  opts.ambient = AmbientManifold::torus(d);
  opts.group = grp;
  opts.curve_wobble = wobble;
  return random_state(opts, rng);
}

VolState act_right_vol(const VolState& z, const RightTransformer& r) {
  VolState out = z;
  const Eigen::VectorXd& lift = r.psi.lift();
  out.Q = z.ambient.curve_interpolate(z.source, z.Q, lift);
  out.P = interpolate(z.source, z.P, lift);
  out.sigma = interpolate(z.source, z.sigma, lift);
  out.gamma = multiply(resample(z.source, z.group, z.gamma, r.psi), r.b);
  return out;
}

PhasePoint node_point(const VolState& z, int i) {
  return {z.Q.row(i).transpose(), z.P.row(i).transpose(), z.sigma.row(i).transpose(),
          z.gamma[i]};
}

PhaseTangent node_tangent(const StateTangent& t, int i) {
  return {t.dQ.row(i).transpose(), t.dP.row(i).transpose(), t.eta.row(i).transpose(),
          t.dsigma.row(i).transpose()};
}

PhasePoint perturb(const StructureGroup& grp, const PhasePoint& x, const PhaseTangent& v,
                   double eps) {
  return {x.q + eps * v.dq, x.p + eps * v.dp, x.sigma + eps * v.dsigma,
          grp.exp(eps * v.eta) * x.g};
}

PhaseTangent central_difference(const StructureGroup& grp, const PhasePoint& plus,
                                const PhasePoint& minus, double eps) {
  return {(plus.q - minus.q) / (2 * eps), (plus.p - minus.p) / (2 * eps),
          grp.log(plus.g * minus.g.inverse()) / (2 * eps),
          (plus.sigma - minus.sigma) / (2 * eps)};
}

double theta_point(const PhasePoint& x, const PhaseTangent& v) {
  return x.p.dot(v.dq) + x.sigma.dot(v.eta);
}

double omega_point(const StructureGroup& grp, const PhasePoint& x, const PhaseTangent& a,
                   const PhaseTangent& b) {
  return a.dq.dot(b.dp) - a.dp.dot(b.dq) + b.dsigma.dot(a.eta) - a.dsigma.dot(b.eta) -
         x.sigma.dot(grp.ad(a.eta, b.eta));
}

Eigen::Matrix3d algebra_matrix(const StructureGroup& grp, int a) {
  if (grp.kind() == GroupKind::circle) return hat(Eigen::Vector3d::UnitZ());
  return hat(Eigen::Vector3d::Unit(a));
}

PhasePoint rho(const StructureGroup& grp, const BundleCovector& c) {
  PhasePoint x{c.q, c.p, Eigen::VectorXd(grp.dim()), c.g};
  const Eigen::Matrix3d g = c.g.matrix();
  for (int a = 0; a < grp.dim(); ++a) x.sigma(a) = (c.K.transpose() * algebra_matrix(grp, a) * g).trace();
  return x;
}

BundleCovector rho_inverse(const StructureGroup& grp, const PhasePoint& x) {
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  for (int a = 0; a < grp.dim(); ++a) k += 0.5 * x.sigma(a) * algebra_matrix(grp, a);
  return {x.q, x.p, k * x.g.matrix(), x.g};
}

BundleCovector act_right(const BundleCovector& c, const GroupElement& h) {
  return {c.q, c.p, c.K * h.matrix(), c.g * h};
}

double omega_bar(const VolState& z, const StateTangent& a, const StateTangent& b) {
  double acc = 0.0;
  for (int i = 0; i < z.nodes(); ++i)
    acc += z.source.weights()(i) *
           omega_point(z.group, node_point(z, i), node_tangent(a, i), node_tangent(b, i));
  return acc;
}

double jl_vol(const VolState& z, const Observable& h) {
  Eigen::VectorXd f(z.nodes());
  for (int i = 0; i < z.nodes(); ++i)
    f(i) = h.value(z.Q.row(i).transpose(), z.P.row(i).transpose(), z.sigma.row(i).transpose());
  return quadrature(z.source, f);
}

RightMomentum jr_vol(const VolState& z) {
  if (!z.source.is_grid()) throw Error("jr_vol: source must be a periodic grid");
  return jr(z);
}

RightMomentum d_jr_vol(const VolState& z, const StateTangent& t) {
  if (!z.source.is_grid()) throw Error("d_jr_vol: source must be a periodic grid");
  const Field dq = z.ambient.curve_derivative(z.source, z.Q);
  const Field ddq = derivative(z.source, t.dQ);
  const Field deta = derivative(z.source, t.eta);
  const Field r = logderiv_right(z.source, z.group, z.gamma);
  RightMomentum out;
  out.alpha.resize(z.nodes());
  out.nu.resize(z.nodes(), z.group.dim());
  for (int i = 0; i < z.nodes(); ++i) {
    const CoalgebraVector s = z.sigma.row(i).transpose();
    const CoalgebraVector ds =
        z.group.coad(t.eta.row(i).transpose(), s) + t.dsigma.row(i).transpose();
    out.alpha(i) = t.dP.row(i).dot(dq.row(i)) + z.P.row(i).dot(ddq.row(i)) +
                   ds.dot(r.row(i).transpose()) + s.dot(deta.row(i).transpose());
    out.nu.row(i) = z.group.coAd(z.gamma[i], ds).transpose();
  }
  return out;
}

double reduced_poisson(const Observable& f, const Observable& g, const PhasePoint& x,
                       const StructureGroup& grp) {
  const ObservableValue a = f.evaluate(x.q, x.p, x.sigma);
  const ObservableValue b = g.evaluate(x.q, x.p, x.sigma);
  return a.dq.dot(b.dp) - a.dp.dot(b.dq) + x.sigma.dot(grp.ad(a.dsigma, b.dsigma));
}

Observable poisson_observable(const Observable& f, const Observable& g, const StructureGroup& grp) {
  return Observable::from_value(
      f.d(), f.m(),
      [f, g, grp](const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::VectorXd& s) {
        return reduced_poisson(f, g, PhasePoint{q, p, s, grp.identity()}, grp);
      },
      "{" + f.name() + "," + g.name() + "}");
}

PhaseTangent trivialized_hvf(const Observable& h, const PhasePoint& x, const StructureGroup& grp) {
  const ObservableValue v = h.evaluate(x.q, x.p, x.sigma);
  return {v.dp, -v.dq, v.dsigma, -grp.coad(v.dsigma, x.sigma)};
}

StateTangent chromo_generator(const Observable& h, const VolState& z) {
  StateTangent out = zero_tangent(z);
  for (int i = 0; i < z.nodes(); ++i) {
    const PhaseTangent v = trivialized_hvf(h, node_point(z, i), z.group);
    out.dQ.row(i) = v.dq.transpose();
    out.dP.row(i) = v.dp.transpose();
    out.eta.row(i) = v.eta.transpose();
    out.dsigma.row(i) = v.dsigma.transpose();
  }
  return out;
}

std::vector<RightAlgebraElement> vol_right_basis(const SourceManifold& s, const StructureGroup& grp,
                                                 int kr) {
  const int n = s.size();
  std::vector<RightAlgebraElement> out;
  out.push_back({Eigen::VectorXd::Ones(n), Field::Zero(n, grp.dim())});
  for (int k = 0; k <= kr; ++k)
    for (int trig = 0; trig < (k == 0 ? 1 : 2); ++trig)
      for (int a = 0; a < grp.dim(); ++a) {
        RightAlgebraElement e{Eigen::VectorXd::Zero(n), Field::Zero(n, grp.dim())};
        for (int i = 0; i < n; ++i) {
          const double x = s.nodes()(i);
          e.zeta(i, a) = trig == 0 ? std::cos(k * x) : std::sin(k * x);
        }
        out.push_back(e);
      }
  return out;
}

StateTangent vol_right_generator(const RightAlgebraElement& xi, const VolState& z) {
  if (xi.v.size() > 0 && (xi.v.array() - xi.v(0)).abs().maxCoeff() > 1e-12)
    throw Error("vol_right_generator: v must be constant on S^1");
  return cotangent_generator_right(xi, z);
}

}  // namespace epaut
