#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "epaut/random.hpp"
#include "epaut/source_grid.hpp"

using namespace epaut;

namespace {

constexpr double kPi = std::numbers::pi;

Field sample(const SourceManifold& s, double (*f)(double)) {
  Field out(s.size(), 1);
  for (int i = 0; i < s.size(); ++i) out(i, 0) = f(s.nodes()(i));
  return out;
}

// Fourth-order central differences on the periodic grid.
Eigen::VectorXd fd4(const Eigen::VectorXd& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    auto at = [&](int k) { return f(((i + k) % n + n) % n); };
    d(i) = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
  }
  return d;
}

}  // namespace

TEST(SourceGrid, WeightsAndNodes) {
  const SourceManifold s = SourceManifold::periodic_grid(16);
  EXPECT_NEAR(s.total_volume(), 2 * kPi, 1e-14);
  EXPECT_NEAR(s.nodes()(1) - s.nodes()(0), 2 * kPi / 16, 1e-15);
  EXPECT_THROW(SourceManifold::point_cloud(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Constant(2, -1.0)),
               Error);
}

TEST(SourceGrid, DerivativeIsExactOnBandLimited) {
  const SourceManifold s = SourceManifold::periodic_grid(64);
  const Field f = sample(s, [](double x) { return std::sin(3 * x); });
  const Field d = derivative(s, f);
  for (int i = 0; i < s.size(); ++i) EXPECT_NEAR(d(i, 0), 3 * std::cos(3 * s.nodes()(i)), 1e-12);
  EXPECT_LT(derivative(s, Field::Constant(64, 2, 1.7)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(SourceGrid, DerivativeAgreesWithFourthOrderDifferences) {
  // |spectral - fd4| should behave like h^4: ratio about 16 per doubling.
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const SourceManifold s = SourceManifold::periodic_grid(n);
    const Field f = sample(s, [](double x) { return std::exp(std::sin(x)); });
    const double err = (derivative(s, f).col(0) - fd4(f.col(0), s.spacing())).cwiseAbs().maxCoeff();
    if (prev > 0) {
      EXPECT_GT(prev / err, 12.0);
      EXPECT_LT(prev / err, 20.0);
    }
    prev = err;
  }
}

TEST(SourceGrid, DerivativeRejectsPointCloud) {
  const SourceManifold s = SourceManifold::point_cloud(Eigen::VectorXd::LinSpaced(3, 0, 1),
                                                       Eigen::VectorXd::Ones(3));
  EXPECT_THROW(derivative(s, Field::Zero(3, 1)), PointCloudHasNoDerivative);
}

TEST(SourceGrid, DerivativeIsADerivation) {
  const SourceManifold s = SourceManifold::periodic_grid(64);
  CounterRng rng(1);
  const Field f = random_band_limited(s, 1, 5, 1.0, rng);
  const Field g = random_band_limited(s, 1, 5, 1.0, rng);
  const Field fg = f.cwiseProduct(g);
  const Field rhs = derivative(s, f).cwiseProduct(g) + f.cwiseProduct(derivative(s, g));
  EXPECT_LT((derivative(s, fg) - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SourceGrid, Quadrature) {
  const SourceManifold s = SourceManifold::periodic_grid(32);
  EXPECT_NEAR(quadrature(s, Eigen::VectorXd::Ones(32)), 2 * kPi, 1e-14);
  EXPECT_NEAR(quadrature(s, sample(s, [](double x) { return std::cos(x); }).col(0)), 0.0, 1e-14);
  auto f = [](double x) { return std::exp(std::sin(x)); };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2 * kPi, 15, 1e-14);
  EXPECT_NEAR(quadrature(s, sample(s, [](double x) { return std::exp(std::sin(x)); }).col(0)),
              oracle, 1e-10);
  EXPECT_NEAR(oracle, 2 * kPi * std::cyl_bessel_i(0.0, 1.0), 1e-12);
}

TEST(SourceGrid, ResampleIdentityAndShift) {
  const SourceManifold s = SourceManifold::periodic_grid(32);
  CounterRng rng(2);
  const Field f = random_band_limited(s, 2, 6, 1.0, rng);
  EXPECT_LT((resample(s, f, GridDiffeo::identity(s)) - f).cwiseAbs().maxCoeff(), 1e-15);
  const Field shifted = resample(s, f, GridDiffeo::shift(s, s.spacing()));
  for (int i = 0; i < 32; ++i) EXPECT_EQ(shifted(i, 1), f((i + 1) % 32, 1));
}

TEST(SourceGrid, ResampleMatchesComposition) {
  const SourceManifold s = SourceManifold::periodic_grid(128);
  auto psi = [](double x) { return x + 0.3 * std::sin(x) + 0.1; };
  auto dpsi = [](double x) { return 1 + 0.3 * std::cos(x); };
  const GridDiffeo g = GridDiffeo::from_function(s, psi, dpsi);
  auto f = [](double x) { return std::sin(x) + 0.3 * std::cos(4 * x); };
  Field fs(128, 1);
  for (int i = 0; i < 128; ++i) fs(i, 0) = f(s.nodes()(i));
  const Field r = resample(s, fs, g);
  for (int i = 0; i < 128; ++i) EXPECT_NEAR(r(i, 0), f(psi(s.nodes()(i))), 1e-8);
}

TEST(SourceGrid, ChangeOfVariables) {
  const SourceManifold s = SourceManifold::periodic_grid(64);
  CounterRng rng(4);
  const Field f = random_band_limited(s, 1, 4, 1.0, rng);
  const GridDiffeo g = GridDiffeo::from_function(
      s, [](double x) { return x + 0.2 * std::sin(x) - 0.4; },
      [](double x) { return 1 + 0.2 * std::cos(x); });
  const Eigen::VectorXd pulled = resample(s, f, g).col(0).cwiseProduct(g.jacobian());
  EXPECT_NEAR(quadrature(s, pulled), quadrature(s, f.col(0)), 1e-8);
}

TEST(SourceGrid, GridDiffeoRejectsNonMonotone) {
  const SourceManifold s = SourceManifold::periodic_grid(16);
  EXPECT_THROW(GridDiffeo::from_function(
                   s, [](double x) { return x + 1.5 * std::sin(x); },
                   [](double x) { return 1 + 1.5 * std::cos(x); }),
               NonMonotone);
  const GridDiffeo g = GridDiffeo::from_lift(s, s.nodes().array() + 0.2 * s.nodes().array().sin());
  EXPECT_NEAR(g.jacobian()(0), 1.2, 1e-12);
}

TEST(SourceGrid, GroupResampleShiftAndSmooth) {
  const SourceManifold s = SourceManifold::periodic_grid(64);
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(8);
  const Field xi = random_band_limited(s, 3, 2, 0.8, rng);
  const GroupField g = exp_field(so3, xi);
  const GroupField shifted = resample(s, so3, g, GridDiffeo::shift(s, 3 * s.spacing()));
  for (int i = 0; i < 64; ++i) EXPECT_LT(shifted[i].distance(g[(i + 3) % 64]), 1e-15);
  // Off-grid sample of exp(xi(x)) with xi a trigonometric polynomial.
  const FourierInterpolant fi(s, xi);
  const double x = 1.2345;
  const GroupElement exact = so3.exp(fi.value(x));
  EXPECT_LT(interpolate_group(s, so3, g, x).distance(exact), 1e-9);
}

TEST(SourceGrid, LogDerivatives) {
  const SourceManifold s = SourceManifold::periodic_grid(32);
  const StructureGroup u1 = StructureGroup::circle();
  const StructureGroup so3 = StructureGroup::rotation3();
  const GroupField constant(32, so3.exp(Eigen::Vector3d(0.1, 0.2, 0.3)));
  EXPECT_LT(logderiv_right(s, so3, constant).cwiseAbs().maxCoeff(), 1e-13);
  GroupField wind;
  for (int i = 0; i < 32; ++i) wind.push_back(GroupElement::from_angle(3 * s.nodes()(i)));
  const Field r = logderiv_right(s, u1, wind);
  EXPECT_LT((r.array() - 3.0).abs().maxCoeff(), 1e-12);
  // Reduced angles wrap but the winding is recovered.
  GroupField wrapped;
  for (const auto& g : wind) wrapped.push_back(GroupElement::from_angle(g.reduced_angle()));
  EXPECT_LT((logderiv_right(s, u1, wrapped).array() - 3.0).abs().maxCoeff(), 1e-12);

  CounterRng rng(12);
  const SourceManifold fine = SourceManifold::periodic_grid(64);
  const GroupField g = exp_field(so3, random_band_limited(fine, 3, 2, 0.6, rng));
  const GroupField h = exp_field(so3, random_band_limited(fine, 3, 2, 0.6, rng));
  // Right log-derivative of the inverse is minus the left log-derivative.
  EXPECT_LT((logderiv_right(fine, so3, inverse(g)) + logderiv_left(fine, so3, g)).cwiseAbs().maxCoeff(), 1e-10);
  // Cocycle identity for products.
  const Field rg = logderiv_right(fine, so3, g), rh = logderiv_right(fine, so3, h);
  const Field rgh = logderiv_right(fine, so3, multiply(g, h));
  for (int i = 0; i < 64; ++i) {
    const AlgebraVector expect = rg.row(i).transpose() + so3.Ad(g[i], rh.row(i).transpose());
    EXPECT_LT((rgh.row(i).transpose() - expect).norm(), 1e-10);
  }
}

TEST(SourceGrid, LogDerivativeDifferential) {
  const SourceManifold s = SourceManifold::periodic_grid(64);
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(13);
  const GroupField g = exp_field(so3, random_band_limited(s, 3, 2, 0.6, rng));
  EXPECT_LT(d_logderiv(s, so3, g, Field::Zero(64, 3)).cwiseAbs().maxCoeff(), 1e-13);
  // Constant gamma: only the differential term survives.
  const GroupField c(64, so3.exp(Eigen::Vector3d(0.3, -0.2, 0.5)));
  Field j = Field::Zero(64, 3);
  j.col(0) = s.nodes().array().sin();
  const Field dl = d_logderiv(s, so3, c, j);
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(dl(i, 0), std::cos(s.nodes()(i)), 1e-12);
  // Finite differences along exp(eps j) gamma.
  const Field jr = random_band_limited(s, 3, 3, 0.7, rng);
  const double eps = 1e-5;
  const Field fd = (logderiv_right(s, so3, multiply(exp_field(so3, eps * jr), g)) -
                    logderiv_right(s, so3, multiply(exp_field(so3, -eps * jr), g))) /
                   (2 * eps);
  const Field an = d_logderiv(s, so3, g, jr);
  EXPECT_LT((fd - an).norm() / an.norm(), 1e-6);
}
