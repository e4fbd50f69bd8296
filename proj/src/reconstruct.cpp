#include "epaut/reconstruct.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "epaut/errors.hpp"
#include "epaut/momentum_maps.hpp"
#include "epaut/observables.hpp"
#include "epaut/yang_mills.hpp"

namespace epaut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarBasisOptions basis_options(const CotangentState& z) {
  ScalarBasisOptions o;
  if (z.ambient.kind() == AmbientKind::euclidean) o.center = z.Q.colwise().mean().transpose();
  return o;
}

double state_deviation(const CotangentState& a, const CotangentState& b) {
  double e = 0.0;
  for (int i = 0; i < a.nodes(); ++i)
    e = std::max(e, a.ambient.distance(a.Q.row(i).transpose(), b.Q.row(i).transpose()));
  e = std::max(e, (a.P - b.P).cwiseAbs().maxCoeff());
  e = std::max(e, (a.sigma - b.sigma).cwiseAbs().maxCoeff());
  return std::max(e, max_distance(a.gamma, b.gamma));
}

struct Curve {
  std::function<Eigen::VectorXd(double)> point;
  std::function<Eigen::VectorXd(double)> tangent;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> displacement;
};

struct CurveMatch {
  Eigen::VectorXd lift;
  double image = 0.0;
};

// Parameters x_i with curve(x_i) = targets_i, increasing by less than one turn.
CurveMatch match_curves(const SourceManifold& s, const Curve& c, const Field& targets,
                        double image_tol) {
  const int n = s.size();
  // Gauss-Newton on |c(x) - y|^2; quadratic at a zero residual.
  const auto match = [&](const Eigen::VectorXd& y, double x) {
    for (int it = 0; it < 60; ++it) {
      const Eigen::VectorXd r = c.displacement(y, c.point(x));
      const Eigen::VectorXd t = c.tangent(x);
      const double step = r.dot(t) / t.squaredNorm();
      x -= step;
      if (std::abs(step) < 1e-14) break;
    }
    return x;
  };
  CurveMatch out{Eigen::VectorXd(n), 0.0};
  Eigen::VectorXd& lift = out.lift;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd y = targets.row(i).transpose();
    double guess;
    if (i == 0) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        const double dist = c.displacement(c.point(s.nodes()(j)), y).norm();
        if (dist < bd) bd = dist, best = j;
      }
      guess = s.nodes()(best);
    } else {
      guess = lift(i - 1) + s.spacing();
    }
    double x = match(y, guess);
    if (i == 0) {
      x -= kTwoPi * std::round((x - s.nodes()(0)) / kTwoPi);
    } else {
      x -= kTwoPi * std::floor((x - lift(i - 1)) / kTwoPi);  // next turn, monotone
    }
    lift(i) = x;
    out.image = std::max(out.image, c.displacement(c.point(x), y).norm());
  }
  if (out.image > image_tol)
    throw ImagesDiffer("a point of the second curve is " + std::to_string(out.image) +
                       " away from the first");
  if (lift(n - 1) - lift(0) >= kTwoPi) throw ImagesDiffer("matched parameters wrap more than once");
  return out;
}

}  // namespace

double level_set_mismatch(const CotangentState& z1, const CotangentState& z2, int test_modes) {
  const auto basis = left_basis(z1.ambient, z1.group, test_modes, basis_options(z1));
  const DiracMomentum m1 = jl(z1), m2 = jl(z2);
  double scale = 0.0, diff = 0.0;
  for (const auto& xi : basis) {
    const double a = jl_eval(m1, xi), b = jl_eval(m2, xi);
    scale = std::max({scale, std::abs(a), std::abs(b)});
    diff = std::max(diff, std::abs(a - b));
  }
  return diff / std::max(scale, 1.0);
}

RightReconstruction reconstruct_right(const CotangentState& z1, const CotangentState& z2,
                                      const ReconstructOptions& opts) {
  if (!z1.source.is_grid() || !z2.source.is_grid() || z1.nodes() != z2.nodes())
    throw Error("reconstruct_right: needs two states on the same periodic grid");
  const double level = level_set_mismatch(z1, z2, opts.test_modes);
  if (level > opts.level_tol) throw NotInLevelSet("jl values differ by " + std::to_string(level));

  const SourceManifold& s = z1.source;
  const Field dq1 = z1.ambient.curve_derivative(s, z1.Q);
  const CurveMatch c = match_curves(
      s,
      {[&](double x) {
         return Eigen::VectorXd(
             z1.ambient.curve_interpolate(s, z1.Q, Eigen::VectorXd::Constant(1, x)).row(0).transpose());
       },
       [&](double x) {
         return Eigen::VectorXd(interpolate(s, dq1, Eigen::VectorXd::Constant(1, x)).row(0).transpose());
       },
       [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return z1.ambient.displacement(a, b); }},
      z2.Q, opts.image_tol);
  const Eigen::VectorXd& lift = c.lift;
  const double image = c.image;

  GridDiffeo psi = GridDiffeo::from_lift(s, lift);
  const GroupField moved = resample(s, z1.group, z1.gamma, psi);
  RightTransformer r{psi, multiply(inverse(moved), z2.gamma)};
  const double verify = state_deviation(coact_right(z1, r), z2);
  if (verify > opts.verify_tol)
    throw NotInLevelSet("reconstructed transformer misses the target by " +
                        std::to_string(verify));
  return {std::move(r), level, image, verify};
}

double vol_level_set_mismatch(const VolState& z1, const VolState& z2, int k_max) {
  double scale = 0.0, diff = 0.0;
  for (const auto& h : observable_basis(z1.ambient.dim(), z1.group.dim(), k_max, 2, true)) {
    const double a = jl_vol(z1, h), b = jl_vol(z2, h);
    scale = std::max({scale, std::abs(a), std::abs(b)});
    diff = std::max(diff, std::abs(a - b));
  }
  return diff / std::max(scale, 1.0);
}

RightReconstruction reconstruct_vol(const VolState& z1, const VolState& z2,
                                    const ReconstructOptions& opts) {
  validate_vol_state(z1);
  validate_vol_state(z2);
  if (z1.nodes() != z2.nodes()) throw Error("reconstruct_vol: node counts differ");
  const SourceManifold& s = z1.source;
  const int d = z1.ambient.dim(), m = z1.group.dim();
  // eta = (q, p, sigma) stacked; q compared on the torus.
  Field eta1(z1.nodes(), 2 * d + m), eta2(z2.nodes(), 2 * d + m);
  eta1 << z1.Q, z1.P, z1.sigma;
  eta2 << z2.Q, z2.P, z2.sigma;
  Field deta1(z1.nodes(), 2 * d + m);
  deta1 << z1.ambient.curve_derivative(s, z1.Q), derivative(s, z1.P), derivative(s, z1.sigma);
  const AmbientManifold& amb = z1.ambient;
  const CurveMatch c = match_curves(
      s,
      {[&](double x) {
         const Eigen::VectorXd at = Eigen::VectorXd::Constant(1, x);
         Eigen::VectorXd v(2 * d + m);
         v << amb.curve_interpolate(s, z1.Q, at).row(0).transpose(),
             interpolate(s, z1.P, at).row(0).transpose(), interpolate(s, z1.sigma, at).row(0).transpose();
         return v;
       },
       [&](double x) {
         return Eigen::VectorXd(interpolate(s, deta1, Eigen::VectorXd::Constant(1, x)).row(0).transpose());
       },
       [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
         Eigen::VectorXd v = b - a;
         v.head(d) = amb.displacement(a.head(d), b.head(d));
         return v;
       }},
      eta2, opts.image_tol);

  GridDiffeo psi = GridDiffeo::from_lift(s, c.lift);
  const double jac = psi.max_jacobian_deviation();
  if (jac > opts.volume_tol)
    throw NotVolumePreserving("max |psi' - 1| = " + std::to_string(jac));
  const double level = vol_level_set_mismatch(z1, z2, opts.test_modes);
  if (level > opts.level_tol) throw NotInLevelSet("jl_vol values differ by " + std::to_string(level));
  const GroupField moved = resample(s, z1.group, z1.gamma, psi);
  RightTransformer r{psi, multiply(inverse(moved), z2.gamma)};
  const double verify = state_deviation(act_right_vol(z1, r), z2);
  if (verify > opts.verify_tol)
    throw NotInLevelSet("reconstructed transformer misses the target by " +
                        std::to_string(verify));
  return {std::move(r), level, c.image, verify};
}

}  // namespace epaut
