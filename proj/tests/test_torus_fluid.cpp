#include <cmath>

#include <gtest/gtest.h>

#include "epaut/errors.hpp"
#include "epaut/random.hpp"
#include "epaut/torus_fluid.hpp"

using namespace epaut;

namespace {

// Divergence-free field from a random stream function on T^2.
Field random_solenoidal(const TorusGrid& g, CounterRng& rng) {
  const Field x = g.coordinates();
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(g.size());
  for (int k1 = -3; k1 <= 3; ++k1)
    for (int k2 = -3; k2 <= 3; ++k2) {
      const double a = rng.normal() / (1 + k1 * k1 + k2 * k2), ph = rng.uniform(0, 6.28);
      psi += a * (k1 * x.col(0) + k2 * x.col(1)).array().unaryExpr([ph](double t) { return std::cos(t + ph); }).matrix();
    }
  Field u(g.size(), 2);
  const Field grad = g.gradient(psi);
  u.col(0) = grad.col(1);
  u.col(1) = -grad.col(0);
  return u;
}

}  // namespace

TEST(TorusGrid, SpectralCalculus) {
  const TorusGrid g(16, 2);
  const Field x = g.coordinates();
  Eigen::VectorXd f(g.size()), lap(g.size());
  for (int i = 0; i < g.size(); ++i) {
    f(i) = std::sin(x(i, 0)) * std::cos(2 * x(i, 1));
    lap(i) = -5 * f(i);
  }
  const Field grad = g.gradient(f);
  for (int i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(grad(i, 0), std::cos(x(i, 0)) * std::cos(2 * x(i, 1)), 1e-12);
    EXPECT_NEAR(grad(i, 1), -2 * std::sin(x(i, 0)) * std::sin(2 * x(i, 1)), 1e-12);
  }
  EXPECT_LT((g.poisson(lap) - f).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(g.integrate(Eigen::VectorXd::Ones(g.size())), 4 * M_PI * M_PI, 1e-12);
}

TEST(EpautVol, TaylorGreenIsSteadyWithKnownPressure) {
  const TorusGrid g(32, 2);
  const Field x = g.coordinates();
  Field u(g.size(), 2);
  Eigen::VectorXd p(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double a = x(i, 0), b = x(i, 1);
    u(i, 0) = std::sin(a) * std::cos(b);
    u(i, 1) = -std::cos(a) * std::sin(b);
    p(i) = (std::cos(2 * a) + std::cos(2 * b)) / 4 - 0.5 * u.row(i).squaredNorm();
  }
  p.array() -= p.mean();
  for (const auto& grp : {StructureGroup::circle(), StructureGroup::rotation3()}) {
    const EpautVolRate r = epautvol_rhs(g, grp, u, Field::Zero(g.size(), grp.dim()));
    // Nonlinear term grad(-(cos 2x + cos 2y)/4) + grad |u|^2/2 is balanced by grad p.
    EXPECT_LT(r.dm.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((r.pressure - p).cwiseAbs().maxCoeff() / p.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_EQ(r.dn.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(EpautVol, ZeroVelocityLeavesOnlyCoadjointTerm) {
  const TorusGrid g(16, 2);
  CounterRng rng(1);
  const Field x = g.coordinates();
  for (const auto& grp : {StructureGroup::circle(), StructureGroup::rotation3()}) {
    // Modes up to 3, so products stay resolved on the 16^2 grid.
    Field nu(g.size(), grp.dim());
    for (int a = 0; a < grp.dim(); ++a) {
      const double c1 = rng.normal(), c2 = rng.normal(), c3 = rng.normal();
      for (int i = 0; i < g.size(); ++i)
        nu(i, a) = c1 * std::sin(x(i, 0) + x(i, 1)) + c2 * std::cos(2 * x(i, 1)) + c3 * std::sin(3 * x(i, 0));
    }
    const EpautVolRate r = epautvol_rhs(g, grp, Field::Zero(g.size(), 2), nu);
    for (int i = 0; i < g.size(); ++i) {
      const CoalgebraVector n = grp.flat(nu.row(i).transpose());
      EXPECT_LT((r.dn.row(i).transpose() + grp.coad(nu.row(i).transpose(), n)).norm(), 1e-15);
    }
    EXPECT_LT(r.dn.cwiseAbs().maxCoeff(), 1e-15);
    // n . grad nu is a gradient for this l, so the pressure absorbs it.
    EXPECT_LT(r.dm.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(EpautVol, ProjectedTendencyIsDivergenceFree) {
  const TorusGrid g(32, 2);
  CounterRng rng(2);
  const StructureGroup so3 = StructureGroup::rotation3();
  for (int trial = 0; trial < 3; ++trial) {
    const Field u = random_solenoidal(g, rng);
    const Field nu = 0.3 * Field::Random(g.size(), 3);
    const EpautVolRate r = epautvol_rhs(g, so3, u, nu);
    EXPECT_LT(g.divergence(r.dm).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(r.pressure.mean(), 0.0, 1e-13);
  }
}

TEST(EpautVol, AdvectsChargeDensity) {
  // Uniform flow along x transports n: dn/dt = -u dn/dx.
  const TorusGrid g(16, 2);
  const Field x = g.coordinates();
  Field u = Field::Zero(g.size(), 2);
  u.col(0).setConstant(0.7);
  Field nu(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) nu(i, 0) = std::sin(x(i, 0) + 2 * x(i, 1));
  const StructureGroup u1 = StructureGroup::circle();
  const EpautVolRate r = epautvol_rhs(g, u1, u, nu);
  for (int i = 0; i < g.size(); ++i)
    EXPECT_NEAR(r.dn(i, 0), -0.7 * u1.tau_scale() * std::cos(x(i, 0) + 2 * x(i, 1)), 1e-12);
}

TEST(EpautVol, RejectsCompressibleVelocity) {
  const TorusGrid g(16, 2);
  const Field x = g.coordinates();
  Field u = Field::Zero(g.size(), 2);
  for (int i = 0; i < g.size(); ++i) u(i, 0) = std::sin(x(i, 0));
  EXPECT_THROW(epautvol_rhs(g, StructureGroup::circle(), u, Field::Zero(g.size(), 1)), NotDivergenceFree);
  EXPECT_THROW(TorusGrid(7, 2), ConfigInvalid);
}
