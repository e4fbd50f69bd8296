#include <cmath>
#include <limits>

#include "epaut/dual_pair.hpp"
#include "epaut/random.hpp"

namespace epaut {

SymplecticChart assemble_chart(const CotangentState& z, bool with_condition) {
  const StateLayout lay(z);
  const int d = lay.d(), m = lay.m();
  SymplecticChart chart;
  chart.omega = Eigen::MatrixXd::Zero(lay.size(), lay.size());
  Eigen::MatrixXd& om = chart.omega;
  for (int i = 0; i < z.nodes(); ++i) {
    const double w = z.source.weights()(i);
    for (int k = 0; k < d; ++k) {
      om(lay.q(i, k), lay.p(i, k)) = w;
      om(lay.p(i, k), lay.q(i, k)) = -w;
    }
    const Eigen::MatrixXd c = z.group.coad_matrix(z.sigma.row(i).transpose());
    for (int a = 0; a < m; ++a) {
      om(lay.eta(i, a), lay.sigma(i, a)) = w;
      om(lay.sigma(i, a), lay.eta(i, a)) = -w;
      // -<sigma, [e_a, e_b]> = -<coad(e_a, sigma), e_b>
      for (int b = 0; b < m; ++b) om(lay.eta(i, a), lay.eta(i, b)) = -w * c(b, a);
    }
  }
  if (with_condition) {
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(om);
    const Eigen::VectorXd s = svd.singularValues();
    chart.condition_number = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                                                 : std::numeric_limits<double>::infinity();
  }
  return chart;
}

double omega_pair(const CotangentState& z, const StateTangent& a, const StateTangent& b) {
  double acc = 0.0;
  for (int i = 0; i < z.nodes(); ++i) {
    const double w = z.source.weights()(i);
    const AlgebraVector e1 = a.eta.row(i).transpose(), e2 = b.eta.row(i).transpose();
    const CoalgebraVector s = z.sigma.row(i).transpose();
    acc += w * (a.dQ.row(i).dot(b.dP.row(i)) - a.dP.row(i).dot(b.dQ.row(i)) +
                b.dsigma.row(i).dot(a.eta.row(i)) - a.dsigma.row(i).dot(b.eta.row(i)) -
                s.dot(z.group.ad(e1, e2)));
  }
  return acc;
}

namespace {

// Chart point: flat (Q, P, theta, sigma) with gamma = exp(theta) gamma0.
double theta_one_form(const CotangentState& z, const StateLayout& lay, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (int i = 0; i < z.nodes(); ++i) {
    const double w = z.source.weights()(i);
    AlgebraVector theta(lay.m()), yt(lay.m());
    CoalgebraVector s(lay.m());
    for (int a = 0; a < lay.m(); ++a) {
      theta(a) = c(lay.eta(i, a));
      yt(a) = y(lay.eta(i, a));
      s(a) = c(lay.sigma(i, a));
    }
    double pq = 0.0;
    for (int k = 0; k < lay.d(); ++k) pq += c(lay.p(i, k)) * y(lay.q(i, k));
    acc += w * (pq + s.dot(z.group.dexp(theta) * yt));
  }
  return acc;
}

StateTangent chart_to_tangent(const CotangentState& z, const StateLayout& lay,
                              const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
  StateTangent t = lay.unflatten(x);
  for (int i = 0; i < z.nodes(); ++i) {
    AlgebraVector theta(lay.m());
    for (int a = 0; a < lay.m(); ++a) theta(a) = c(lay.eta(i, a));
    t.eta.row(i) = (z.group.dexp(theta) * t.eta.row(i).transpose()).transpose();
  }
  return t;
}

}  // namespace

ChartValidation validate_chart(const CotangentState& z, std::uint64_t seed, int pairs, double h) {
  CounterRng rng(seed, 0x636861);
  const StateLayout lay(z);
  // Chart center: theta0 random, gamma0 = exp(-theta0) gamma so the point is z.
  Eigen::VectorXd c = lay.flatten({z.Q, z.P, Field::Zero(z.nodes(), lay.m()), z.sigma});
  for (int i = 0; i < z.nodes(); ++i)
    for (int a = 0; a < lay.m(); ++a) c(lay.eta(i, a)) = 0.4 * rng.normal();
  auto oracle = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double xy = (theta_one_form(z, lay, c + h * x, y) - theta_one_form(z, lay, c - h * x, y)) / (2 * h);
    const double yx = (theta_one_form(z, lay, c + h * y, x) - theta_one_form(z, lay, c - h * y, x)) / (2 * h);
    return -xy + yx;
  };
  auto masked = [&](bool canonical, bool group) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(lay.size());
    for (int i = 0; i < z.nodes(); ++i) {
      for (int k = 0; k < lay.d(); ++k) {
        if (canonical) v(lay.q(i, k)) = rng.normal(), v(lay.p(i, k)) = rng.normal();
      }
      for (int a = 0; a < lay.m(); ++a) {
        if (group) v(lay.eta(i, a)) = rng.normal(), v(lay.sigma(i, a)) = rng.normal();
      }
    }
    return v;
  };
  ChartValidation out;
  out.pairs = pairs;
  for (int p = 0; p < pairs; ++p) {
    for (int kind = 0; kind < 3; ++kind) {
      const bool canonical = kind != 1, group = kind != 0;
      const Eigen::VectorXd x = masked(canonical, group), y = masked(canonical, group);
      const double expected = oracle(x, y);
      const double got = omega_pair(z, chart_to_tangent(z, lay, c, x), chart_to_tangent(z, lay, c, y));
      const double rel = std::abs(got - expected) / std::max(1e-300, std::abs(expected));
      double& slot = kind == 0 ? out.canonical_block_error
                               : (kind == 1 ? out.group_block_error : out.mixed_error);
      slot = std::max(slot, rel);
    }
  }
  return out;
}

}  // namespace epaut
