#include "epaut/isotropy.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "epaut/errors.hpp"
#include "epaut/random.hpp"

namespace epaut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Smooth step: 1 on [0, r/2], 0 on [r, inf).
double bump(double t, double r) {
  if (t <= 0.5 * r) return 1.0;
  if (t >= r) return 0.0;
  const double s = (t - 0.5 * r) / (0.5 * r);
  const auto g = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  return g(1.0 - s) / (g(1.0 - s) + g(s));
}

Eigen::VectorXd unit_tangent(const Eigen::VectorXd& dq) { return dq / dq.norm(); }

void require_planar_grid(const CotangentState& z, const char* who) {
  if (!z.source.is_grid()) throw Error(std::string(who) + ": needs a periodic grid source");
  if (z.ambient.kind() != AmbientKind::euclidean)
    throw Error(std::string(who) + ": needs a Euclidean ambient space");
}

struct CurveProjector {
  FourierInterpolant curve;
  int n;
  Eigen::VectorXd nodes;
  Field q;

  // Parameter of the nearest point of the curve to y.
  double project(const Eigen::VectorXd& y) const {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double dist = (q.row(i).transpose() - y).squaredNorm();
      if (dist < bd) bd = dist, best = i;
    }
    double s = nodes(best);
    for (int it = 0; it < 50; ++it) {
      const Eigen::VectorXd r = curve.value(s) - y;
      const Eigen::VectorXd d1 = curve.derivative(s, 1), d2 = curve.derivative(s, 2);
      const double g = r.dot(d1), dg = d1.squaredNorm() + r.dot(d2);
      if (dg <= 0) throw ProjectionFailed("nearest point is not a strict minimum");
      const double step = g / dg;
      s -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(s))) return s;
    }
    throw ProjectionFailed("Newton projection did not converge");
  }
};

}  // namespace

double estimate_reach(const CotangentState& z) {
  require_planar_grid(z, "estimate_reach");
  const int n = z.nodes();
  const Field d1 = derivative(z.source, z.Q), d2 = derivative(z.source, d1);
  double reach = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double a = d1.row(i).squaredNorm(), b = d2.row(i).squaredNorm(),
                 c = d1.row(i).dot(d2.row(i));
    const double wedge = std::sqrt(std::max(0.0, a * b - c * c));
    if (wedge > 0) reach = std::min(reach, std::pow(a, 1.5) / wedge);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = std::abs(z.source.nodes()(i) - z.source.nodes()(j));
      dx = std::min(dx, kTwoPi - dx);
      if (dx < 0.25 * kTwoPi) continue;
      reach = std::min(reach, 0.5 * (z.Q.row(i) - z.Q.row(j)).norm());
    }
  return reach;
}

Field random_conormal(const CotangentState& z, std::uint64_t seed, double amplitude) {
  require_planar_grid(z, "random_conormal");
  CounterRng rng(seed);
  const Field dq = derivative(z.source, z.Q);
  Field out(z.nodes(), z.ambient.dim());
  for (int i = 0; i < z.nodes(); ++i) {
    const Eigen::VectorXd t = unit_tangent(dq.row(i).transpose());
    Eigen::VectorXd v = rng.normal_vector(z.ambient.dim());
    v -= v.dot(t) * t;
    out.row(i) = amplitude * v.transpose();
  }
  return out;
}

IsotropyWitness isotropy_witness(const CotangentState& z, const Field& target,
                                 double conormal_tol, double fd_step) {
  require_planar_grid(z, "isotropy_witness");
  const int n = z.nodes(), d = z.ambient.dim(), m = z.group.dim();
  if (target.rows() != n || target.cols() != d)
    throw Error("isotropy_witness: target shape does not match the state");
  if (!is_regular(z)) throw NotRegular("isotropy_witness: state has a node with P = sigma = 0");
  const Field dq = derivative(z.source, z.Q);
  for (int i = 0; i < n; ++i) {
    const double tangential = target.row(i).dot(unit_tangent(dq.row(i).transpose()));
    if (std::abs(tangential) > conormal_tol)
      throw NotConormal("target has tangential component " + std::to_string(tangential) +
                        " at node " + std::to_string(i));
  }

  IsotropyWitness w;
  if (target.cwiseAbs().maxCoeff() == 0.0) {
    w.xi = zero_left_element(z.ambient, z.group);
    w.term_p = Field::Zero(n, d);
    w.term_sigma = Field::Zero(n, d);
    return w;
  }
  w.reach = estimate_reach(z);
  w.cutoff = 0.5 * w.reach;

  Field lambda(n, d), psharp(n, d), ssharp(n, m);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd s = z.sigma.row(i).transpose();
    const double denom = z.P.row(i).squaredNorm() + z.group.tau_star(s, s);
    lambda.row(i) = target.row(i) / denom;
    psharp.row(i) = z.P.row(i);
    ssharp.row(i) = z.group.sharp(s).transpose();
  }
  Field packed(n, 2 * d + m);
  packed << lambda, psharp, ssharp;
  const auto proj = std::make_shared<CurveProjector>(
      CurveProjector{FourierInterpolant(z.source, z.Q), n, z.source.nodes(), z.Q});
  const auto data = std::make_shared<FourierInterpolant>(z.source, packed);
  const double cutoff = w.cutoff;

  // Returns (f P^#, f sigma^#) stacked; f vanishes on the curve.
  const auto weighted = [=](const Eigen::VectorXd& y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d + m);
    // Cheap exclusion before projecting.
    const double coarse = (proj->q.rowwise() - y.transpose()).rowwise().norm().minCoeff();
    if (coarse >= 2 * cutoff) return out;
    const double s = proj->project(y);
    const Eigen::VectorXd off = y - proj->curve.value(s);
    const double chi = bump(off.norm(), cutoff);
    if (chi == 0.0) return out;
    const Eigen::VectorXd vals = data->value(s);
    const double f = chi * vals.head(d).dot(off);
    out.head(d) = f * vals.segment(d, d);
    out.tail(m) = f * vals.tail(m);
    return out;
  };
  const AmbientField u = AmbientField::from_value(
      d, d, [=](const Eigen::VectorXd& y) { return Eigen::VectorXd(-weighted(y).head(d)); },
      fd_step);
  const AmbientField nu = AmbientField::from_value(
      d, m, [=](const Eigen::VectorXd& y) { return Eigen::VectorXd(-weighted(y).tail(m)); },
      fd_step);
  w.xi = {u, nu};

  w.term_p.resize(n, d);
  w.term_sigma.resize(n, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd q = z.Q.row(i).transpose();
    w.term_p.row(i) = (u.jacobian(q).transpose() * z.P.row(i).transpose()).transpose();
    w.term_sigma.row(i) = (nu.jacobian(q).transpose() * z.sigma.row(i).transpose()).transpose();
  }
  w.residual = (target + w.term_p + w.term_sigma).cwiseAbs().maxCoeff();
  return w;
}

}  // namespace epaut
