#include <cmath>

#include <gtest/gtest.h>

#include "epaut/errors.hpp"
#include "epaut/hamiltonian_flow.hpp"
#include "epaut/random.hpp"

using namespace epaut;

namespace {

const StructureGroup kGroups[] = {StructureGroup::circle(), StructureGroup::rotation3()};

PhasePoint random_point(int d, const StructureGroup& grp, CounterRng& rng) {
  return {rng.normal_vector(d), rng.normal_vector(d), rng.normal_vector(grp.dim()),
          random_group_element(grp, rng)};
}

SymplecticMap random_flow(const StructureGroup& grp, std::uint64_t seed) {
  return HamiltonianFlow(random_observable(2, grp.dim(), seed), grp);
}

}  // namespace

TEST(HamiltonianFlow, InverseAndSymplecticity) {
  for (const auto& grp : kGroups) {
    CounterRng rng(1);
    const HamiltonianFlow f(random_observable(2, grp.dim(), 11), grp);
    for (int trial = 0; trial < 3; ++trial) {
      const PhasePoint x = random_point(2, grp, rng);
      const PhasePoint back = f.inverse().apply(f.apply(x));
      EXPECT_LT((back.q - x.q).norm() + (back.p - x.p).norm() + (back.sigma - x.sigma).norm(), 1e-9);
      EXPECT_LT(back.g.distance(x.g), 1e-9);
      EXPECT_LT(symplecticity_defect(f, x, 5 + trial), 1e-6);
    }
  }
}

TEST(HamiltonianFlow, ConservesItsObservableAndCasimir) {
  for (const auto& grp : kGroups) {
    CounterRng rng(2);
    const Observable h = random_observable(2, grp.dim(), 12);
    const PhasePoint x = random_point(2, grp, rng);
    const PhasePoint y = HamiltonianFlow(h, grp).apply(x);
    EXPECT_NEAR(h.value(y.q, y.p, y.sigma), h.value(x.q, x.p, x.sigma), 1e-10);
    EXPECT_NEAR(y.sigma.norm(), x.sigma.norm(), 1e-10);
  }
}

TEST(HamiltonianFlow, LinearSigmaObservableIsExplicit) {
  const StructureGroup so3 = StructureGroup::rotation3();
  const Eigen::Vector3d xi(0.2, -0.5, 0.9);
  CounterRng rng(3);
  const PhasePoint x = random_point(2, so3, rng);
  const PhasePoint y = HamiltonianFlow(Observable::linear_sigma(2, xi), so3, 0.7).apply(x);
  EXPECT_LT(y.g.distance(so3.exp(0.7 * xi) * x.g), 1e-10);
  EXPECT_LT((y.sigma - so3.coAd(so3.exp(-0.7 * xi), x.sigma)).norm(), 1e-10);
  EXPECT_LT((y.q - x.q).norm() + (y.p - x.p).norm(), 1e-15);
}

TEST(HamiltonianFlow, CompositionOrder) {
  const StructureGroup u1 = StructureGroup::circle();
  const SymplecticMap a = random_flow(u1, 21), b = random_flow(u1, 22);
  CounterRng rng(4);
  const PhasePoint x = random_point(2, u1, rng);
  const PhasePoint ab = compose(a, b).apply(x), seq = a.apply(b.apply(x));
  EXPECT_LT((ab.q - seq.q).norm() + (ab.p - seq.p).norm(), 1e-14);
  EXPECT_TRUE(SymplecticMap::identity(u1).is_identity());
}

TEST(Cocycle, IdentityFlowGivesZero) {
  for (const auto& grp : kGroups) {
    CounterRng rng(5);
    const PhasePoint p0 = random_point(2, grp, rng);
    EXPECT_EQ(cocycle_B(SymplecticMap::identity(grp), random_flow(grp, 31), p0), 0.0);
    // A flow of time zero is the identity map too, up to the difference quotient.
    const SymplecticMap still = HamiltonianFlow(random_observable(2, grp.dim(), 32), grp, 0.0);
    EXPECT_LT(std::abs(cocycle_B(still, random_flow(grp, 33), p0)), 1e-8);
  }
}

TEST(Cocycle, TwoCocycleIdentity) {
  for (const auto& grp : kGroups) {
    CounterRng rng(6);
    for (std::uint64_t t = 0; t < 2; ++t) {
      const SymplecticMap g = random_flow(grp, 40 + 3 * t), h = random_flow(grp, 41 + 3 * t),
                          k = random_flow(grp, 42 + 3 * t);
      const PhasePoint p0 = random_point(2, grp, rng);
      const double lhs = cocycle_B(g, h, p0) + cocycle_B(compose(g, h), k, p0);
      const double rhs = cocycle_B(h, k, p0) + cocycle_B(g, compose(h, k), p0);
      EXPECT_LT(std::abs(lhs - rhs), 1e-6);
    }
  }
}

TEST(Cocycle, BasePointChangeIsCoboundary) {
  for (const auto& grp : kGroups) {
    CounterRng rng(7);
    const SymplecticMap g = random_flow(grp, 50), h = random_flow(grp, 51);
    const PhasePoint p0 = random_point(2, grp, rng);
    PhasePoint p1 = random_point(2, grp, rng);
    p1.g = grp.exp(0.5 * rng.normal_vector(grp.dim())) * p0.g;
    const double diff = cocycle_B(g, h, p1) - cocycle_B(g, h, p0);
    const double cob = coboundary_term(compose(g, h), p0, p1) - coboundary_term(g, p0, p1) -
                       coboundary_term(h, p0, p1);
    EXPECT_LT(std::abs(diff - cob), 1e-6);
  }
}

TEST(Cocycle, HamiltonianPathIntegralIsPathIndependent) {
  // theta - f^* theta is exact for a Hamiltonian f, so a detour changes nothing.
  const StructureGroup so3 = StructureGroup::rotation3();
  const SymplecticMap f = random_flow(so3, 60);
  CounterRng rng(8);
  const PhasePoint a = random_point(2, so3, rng);
  PhasePoint b = random_point(2, so3, rng), mid = random_point(2, so3, rng);
  b.g = so3.exp(0.4 * rng.normal_vector(3)) * a.g;
  mid.g = so3.exp(0.4 * rng.normal_vector(3)) * a.g;
  const double direct = path_integral(f, a, b);
  const double detour = path_integral(f, a, mid) + path_integral(f, mid, b);
  EXPECT_NEAR(direct, detour, 1e-7);
}

TEST(Cocycle, UnreachableToleranceThrows) {
  const StructureGroup u1 = StructureGroup::circle();
  CounterRng rng(9);
  const PhasePoint p0 = random_point(2, u1, rng);
  CocycleOptions opts;
  opts.max_depth = 0;
  opts.accept = 1e-30;
  EXPECT_THROW(cocycle_B(random_flow(u1, 70), random_flow(u1, 71), p0, opts), QuadratureNotConverged);
}
