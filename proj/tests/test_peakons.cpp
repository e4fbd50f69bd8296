#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "epaut/errors.hpp"
#include "epaut/peakons.hpp"

using namespace epaut;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd at(double x) { return Eigen::VectorXd::Constant(1, x); }

CotangentState ensemble(const StructureGroup& grp, std::uint64_t seed, int n = 5,
                        bool circle = false) {
  EnsembleSampler s;
  s.nodes = n;
  s.group = grp;
  if (circle) s.ambient = AmbientManifold::torus(1);
  CounterRng rng(seed);
  return random_ensemble(s, rng);
}

KernelPair line_kernels(double a1 = 1.0, double a2 = 0.7) {
  return {GreensKernel::line(a1), GreensKernel::line(a2)};
}

double state_gap(const CotangentState& a, const CotangentState& b) {
  return std::max({(a.Q - b.Q).cwiseAbs().maxCoeff(), (a.P - b.P).cwiseAbs().maxCoeff(),
                   (a.sigma - b.sigma).cwiseAbs().maxCoeff(), max_distance(a.gamma, b.gamma)});
}

}  // namespace

TEST(GreensKernel, PeakValueAndJump) {
  for (double a : {0.5, 1.0, 2.0}) {
    for (const auto& g : {GreensKernel::line(a), GreensKernel::circle(a)}) {
      EXPECT_EQ(g.gradient(at(0.0))(0), 0.0);
      const double h = 1e-7;
      // (1 - a^2 d^2) G = delta: the derivative jumps by -1/a^2 across 0.
      const double right = (g.value(at(2 * h)) - g.value(at(h))) / h;
      const double left = (g.value(at(-h)) - g.value(at(-2 * h))) / h;
      EXPECT_NEAR(right - left, -1.0 / (a * a), 1e-5);
      for (double x : {0.3, 1.1, 2.5}) {
        const double second =
            (g.value(at(x + 1e-4)) - 2 * g.value(at(x)) + g.value(at(x - 1e-4))) / 1e-8;
        EXPECT_NEAR(g.value(at(x)) - a * a * second, 0.0, 1e-6);
        EXPECT_NEAR(g.value(at(x)), g.value(at(-x)), 1e-15);
      }
    }
    EXPECT_NEAR(GreensKernel::line(a).value(at(0.0)), 1.0 / (2 * a), 1e-15);
  }
}

TEST(GreensKernel, CircleKernelIsPeriodizedLineKernel) {
  const GreensKernel c = GreensKernel::circle(0.8), l = GreensKernel::line(0.8);
  for (double x : {0.0, 0.4, 1.7, 3.0}) {
    double sum = 0.0;
    for (int k = -40; k <= 40; ++k) sum += l.value(at(x + 2 * kPi * k));
    EXPECT_NEAR(c.value(at(x)), sum, 1e-14);
  }
}

TEST(GreensKernel, GaussianGradient) {
  const GreensKernel g = GreensKernel::gaussian(0.9);
  const Eigen::Vector2d x(0.3, -0.5);
  Eigen::Vector2d fd;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(k) = 1e-6;
    fd(k) = (g.value(x + e) - g.value(x - e)) / 2e-6;
  }
  EXPECT_LT((g.gradient(x) - fd).norm(), 1e-9);
}

TEST(Peakons, SingleNodeEnergy) {
  const StructureGroup so3 = StructureGroup::rotation3();
  CotangentState z = ensemble(so3, 1, 1);
  z.source = SourceManifold::point_cloud(at(0.0), at(0.6));
  const KernelPair k = line_kernels(1.3, 0.4);
  const Eigen::VectorXd s = z.sigma.row(0).transpose();
  const double w = 0.6;
  EXPECT_NEAR(collective_hamiltonian(z, k),
              0.25 * w * w * (z.P.row(0).squaredNorm() / 1.3 + so3.tau_star(s, s) / 0.4), 1e-14);
}

TEST(Peakons, EnergyIsInvariantUnderRelabeling) {
  const CotangentState z = ensemble(StructureGroup::rotation3(), 2);
  CotangentState r = z;
  for (int i = 0; i < z.nodes(); ++i) {
    const int j = z.nodes() - 1 - i;
    r.Q.row(i) = z.Q.row(j);
    r.P.row(i) = z.P.row(j);
    r.sigma.row(i) = z.sigma.row(j);
    r.gamma[i] = z.gamma[j];
  }
  const KernelPair k = line_kernels();
  EXPECT_NEAR(collective_hamiltonian(r, k), collective_hamiltonian(z, k), 1e-13);
}

TEST(Peakons, EnergyIsConstantAlongTheVectorField) {
  for (bool circle : {false, true}) {
    const CotangentState z = ensemble(StructureGroup::rotation3(), 3, 5, circle);
    const KernelPair k = circle ? KernelPair{GreensKernel::circle(1.0), GreensKernel::circle(0.5)}
                                : line_kernels();
    const StateTangent r = eom_rhs(z, k);
    const double h = 1e-6;
    CotangentState p = z, m = z;
    p.Q += h * r.dQ, p.P += h * r.dP, p.sigma += h * r.dsigma;
    m.Q -= h * r.dQ, m.P -= h * r.dP, m.sigma -= h * r.dsigma;
    EXPECT_LT(std::abs(collective_hamiltonian(p, k) - collective_hamiltonian(m, k)) / (2 * h),
              1e-8);
  }
}

TEST(Peakons, HamiltonsEquationsMatchEnergyGradient) {
  const CotangentState z = ensemble(StructureGroup::rotation3(), 4);
  const KernelPair k = line_kernels();
  const StateTangent r = eom_rhs(z, k);
  const double h = 1e-6;
  for (int i = 0; i < z.nodes(); ++i) {
    const double w = z.source.weights()(i);
    CotangentState a = z, b = z;
    a.P(i, 0) += h, b.P(i, 0) -= h;
    EXPECT_NEAR((collective_hamiltonian(a, k) - collective_hamiltonian(b, k)) / (2 * h) / w,
                r.dQ(i, 0), 1e-8);
    a = z, b = z;
    a.Q(i, 0) += h, b.Q(i, 0) -= h;
    EXPECT_NEAR(-(collective_hamiltonian(a, k) - collective_hamiltonian(b, k)) / (2 * h) / w,
                r.dP(i, 0), 1e-7);
    for (int c = 0; c < 3; ++c) {
      a = z, b = z;
      a.sigma(i, c) += h, b.sigma(i, c) -= h;
      EXPECT_NEAR((collective_hamiltonian(a, k) - collective_hamiltonian(b, k)) / (2 * h) / w,
                  r.eta(i, c), 1e-6);
    }
  }
}

TEST(Peakons, SingleAbelianPeakonClosedForm) {
  const StructureGroup u1 = StructureGroup::circle();
  CotangentState z = ensemble(u1, 5, 1);
  z.source = SourceManifold::point_cloud(at(0.0), at(0.8));
  z.P(0, 0) = 0.9;
  z.sigma(0, 0) = 0.02;
  const KernelPair k = line_kernels(1.0, 0.5);
  const double w = 0.8;
  const StateTangent r = eom_rhs(z, k);
  EXPECT_NEAR(r.dQ(0, 0), w * 0.9 * 0.5, 1e-15);
  EXPECT_EQ(r.dP(0, 0), 0.0);
  EXPECT_EQ(r.dsigma(0, 0), 0.0);
  const double rate = w * 1.0 * u1.sharp(z.sigma.row(0).transpose())(0);
  EXPECT_NEAR(r.eta(0, 0), rate, 1e-14);
  const EnsembleTrajectory t = simulate(z, k, 1e-3, 1.0, 1000);
  const CotangentState& end = t.states.back();
  EXPECT_NEAR(end.Q(0, 0), z.Q(0, 0) + w * 0.9 * 0.5, 1e-10);
  EXPECT_NEAR(end.gamma[0].distance(u1.exp(Eigen::VectorXd::Constant(1, rate)) * z.gamma[0]), 0.0,
              1e-10);
}

TEST(Peakons, SingleNonAbelianPeakonRotatesAtConstantRate) {
  const StructureGroup so3 = StructureGroup::rotation3();
  CotangentState z = ensemble(so3, 6, 1);
  const KernelPair k = line_kernels();
  const Eigen::VectorXd xi = eom_rhs(z, k).eta.row(0).transpose();
  const EnsembleTrajectory t = simulate(z, k, 1e-3, 1.0, 1000);
  EXPECT_LT((t.states.back().sigma - z.sigma).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(t.states.back().gamma[0].distance(so3.exp(xi) * z.gamma[0]), 1e-10);
}

TEST(Peakons, StepIsSymmetricAndSecondOrder) {
  const CotangentState z = ensemble(StructureGroup::rotation3(), 7);
  const KernelPair k = line_kernels();
  EXPECT_LT(state_gap(step(step(z, 1e-2, k), -1e-2, k), z), 1e-10);
  const StateTangent r = eom_rhs(z, k);
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const CotangentState a = step(z, dt, k), b = step(z, -dt, k);
    const double err = std::max(((a.P - b.P) / (2 * dt) - r.dP).cwiseAbs().maxCoeff(),
                                ((a.Q - b.Q) / (2 * dt) - r.dQ).cwiseAbs().maxCoeff());
    if (prev > 0) EXPECT_NEAR(prev / err, 4.0, 0.4);
    prev = err;
  }
}

TEST(Peakons, AbelianCaseIsTwoComponentPeakonSystem) {
  // Hand-written two-component peakon equations with rho_i = sigma_i / sqrt(c).
  const StructureGroup u1 = StructureGroup::circle();
  const CotangentState z = ensemble(u1, 8);
  const KernelPair k = line_kernels(1.0, 0.6);
  const StateTangent r = eom_rhs(z, k);
  const double c = u1.tau_scale();
  for (int i = 0; i < z.nodes(); ++i) {
    double qdot = 0, pdot = 0;
    for (int j = 0; j < z.nodes(); ++j) {
      const double x = z.Q(i, 0) - z.Q(j, 0);
      const double sgn = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
      qdot += z.P(j, 0) * std::exp(-std::abs(x)) / 2;
      const double rho = z.sigma(i, 0) * z.sigma(j, 0) / c;
      pdot += sgn * (z.P(i, 0) * z.P(j, 0) * std::exp(-std::abs(x)) / 2 +
                     rho * std::exp(-std::abs(x) / 0.6) / (2 * 0.6 * 0.6));
    }
    EXPECT_NEAR(r.dQ(i, 0), qdot, 1e-14);
    EXPECT_NEAR(r.dP(i, 0), pdot, 1e-14);
    EXPECT_EQ(r.dsigma(i, 0), 0.0);
  }
}

TEST(Peakons, ShortRunConservation) {
  const CotangentState z = ensemble(StructureGroup::rotation3(), 9);
  const EnsembleTrajectory t = simulate(z, line_kernels(), 1e-3, 1.0, 10);
  EXPECT_LT(t.max_energy_drift(), 1e-8);
  EXPECT_LT(t.max_charge_drift(), 1e-12);
  EXPECT_LT(t.max_casimir_drift(), 1e-12);
  EXPECT_EQ(t.times.size(), 101u);
}

TEST(Peakons, ReconstructedVelocityMatchesParticleSpeed) {
  CotangentState z = ensemble(StructureGroup::rotation3(), 10);
  const KernelPair k = line_kernels();
  const ReconstructedFields f = reconstruct_fields(z, k, z.Q.col(0));
  const StateTangent r = eom_rhs(z, k);
  EXPECT_LT((f.u - r.dQ).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((f.nu - r.eta).cwiseAbs().maxCoeff(), 1e-14);
  const ReconstructedFields far = reconstruct_fields(z, k, at(200.0));
  EXPECT_LT(far.u.norm(), 1e-60);
  z.sigma.setZero();
  EXPECT_EQ(reconstruct_fields(z, k, at(0.1)).nu.norm(), 0.0);
}

TEST(Peakons, RejectsMismatchedKernels) {
  const CotangentState z = ensemble(StructureGroup::circle(), 11);
  EXPECT_THROW(simulate(z, {GreensKernel::circle(1), GreensKernel::circle(1)}, 1e-3, 0.01),
               ConfigInvalid);
  EXPECT_THROW(GreensKernel::line(0.0), ConfigInvalid);
}

TEST(EpautRhs, UniformTransport) {
  const SourceManifold grid = SourceManifold::periodic_grid(32);
  const StructureGroup so3 = StructureGroup::rotation3();
  const Eigen::ArrayXd x = grid.nodes().array();
  const Field m = (x.cos() + 0.5 * (2 * x).sin()).matrix();
  const Field dm = (-x.sin() + (2 * x).cos()).matrix();
  Field n(32, 3);
  n << x.sin().matrix(), (0.3 * x.cos()).matrix(), Eigen::VectorXd::Constant(32, 0.2);
  const EpautRate r =
      epaut_rhs(grid, so3, m, n, Field::Constant(32, 1, 0.7), Field::Zero(32, 3));
  EXPECT_LT((r.m_dot + 0.7 * dm).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((r.n_dot + 0.7 * derivative(grid, n)).cwiseAbs().maxCoeff(), 1e-12);
  const EpautRate zero_n =
      epaut_rhs(grid, so3, m, Field::Zero(32, 3), Field::Constant(32, 1, 0.7), n);
  EXPECT_EQ(zero_n.n_dot.cwiseAbs().maxCoeff(), 0.0);
}

TEST(EpautRhs, WeakFormDuality) {
  // <(m', n'), xi'> = -<(m, n), [xi, xi']> for smooth densities.
  const SourceManifold grid = SourceManifold::periodic_grid(64);
  const StructureGroup so3 = StructureGroup::rotation3();
  const Eigen::ArrayXd x = grid.nodes().array();
  const AmbientManifold circle = AmbientManifold::torus(1);
  Field m = (0.4 + x.cos()).matrix(), u = (0.5 * x.sin() + 0.2).matrix();
  Field n(64, 3), nu(64, 3);
  n << x.cos().matrix(), (0.5 * x.sin()).matrix(), (0.2 + 0 * x).matrix();
  nu << (0.3 * (2 * x).sin()).matrix(), (0.1 + 0 * x).matrix(), (0.2 * x.cos()).matrix();
  const EpautRate r = epaut_rhs(grid, so3, m, n, u, nu);
  CounterRng rng(3);
  const LeftAlgebraElement test = random_left_element(circle, so3, rng, 2, 0.5);
  Eigen::VectorXd lhs(64), rhs(64);
  const Field du = derivative(grid, u), dnu = derivative(grid, nu);
  for (int i = 0; i < 64; ++i) {
    const Eigen::VectorXd xi = at(x(i));
    const Eigen::VectorXd ut = test.u.value(xi), nt = test.nu.value(xi);
    const Eigen::MatrixXd dut = test.u.jacobian(xi), dnt = test.nu.jacobian(xi);
    lhs(i) = r.m_dot(i, 0) * ut(0) + r.n_dot.row(i).dot(nt);
    const double bu = du(i, 0) * ut(0) - dut(0, 0) * u(i, 0);
    const Eigen::Vector3d bnu = dnu.row(i).transpose() * ut(0) - dnt.col(0) * u(i, 0) +
                                so3.ad(nu.row(i).transpose(), nt);
    rhs(i) = -(m(i, 0) * bu + n.row(i).dot(bnu));
  }
  EXPECT_NEAR(quadrature(grid, lhs), quadrature(grid, rhs), 1e-9);
}

TEST(WeakConsistency, FrozenAndMovingEnsembles) {
  const StructureGroup so3 = StructureGroup::rotation3();
  const AmbientManifold line = AmbientManifold::euclidean(1);
  CotangentState z = ensemble(so3, 12, 3);
  CounterRng rng(4);
  const std::vector<LeftAlgebraElement> tests = {random_left_element(line, so3, rng, 3, 0.5),
                                                 random_left_element(line, so3, rng, 3, 0.5)};
  CotangentState frozen = z;
  frozen.P.setZero();
  frozen.sigma.setZero();
  const KernelPair k = line_kernels();
  EXPECT_EQ(weak_consistency(simulate(frozen, k, 1e-2, 0.1, 1, tests), k, tests), 0.0);
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const double res = weak_consistency(simulate(z, k, dt, 0.2, 1, tests), k, tests);
    if (prev > 0) EXPECT_NEAR(prev / res, 4.0, 0.8);
    prev = res;
  }
}
