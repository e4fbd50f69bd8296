#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "epaut/phase_space.hpp"
#include "epaut/random.hpp"

using namespace epaut;

namespace {

LeftTransformer random_left_transformer(const AmbientManifold& m, const StructureGroup& grp,
                                        CounterRng& rng, double size = 0.3) {
  const LeftAlgebraElement xi = random_left_element(m, grp, rng, 1, size);
  const LeftTransformer f = LeftTransformer::flow(m, grp, xi, 1.0);
  const auto scalars = scalar_basis(m, 1);
  AmbientField gauge = AmbientField::zero(m.dim(), grp.dim());
  for (const auto& sc : scalars)
    for (int a = 0; a < grp.dim(); ++a)
      gauge = gauge + AmbientField::component(sc, a, grp.dim()).scaled(size * rng.normal());
  const LeftTransformer g = LeftTransformer::exp_gauge(m, grp, gauge);
  const LeftTransformer c = LeftTransformer::constant_gauge(m, grp, random_group_element(grp, rng));
  return semidirect_compose(c, semidirect_compose(g, f));
}

double max_pointwise_gap(const LeftTransformer& a, const LeftTransformer& b, CounterRng& rng,
                         int samples) {
  double worst = 0.0;
  const int d = a.ambient().dim();
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd x = rng.normal_vector(d);
    const LeftEvaluation ea = a.evaluate(x), eb = b.evaluate(x);
    worst = std::max(worst, a.ambient().distance(ea.phi, eb.phi));
    worst = std::max(worst, ea.a.distance(eb.a));
    worst = std::max(worst, (ea.dphi - eb.dphi).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ea.dlog_a - eb.dlog_a).cwiseAbs().maxCoeff());
  }
  return worst;
}

StateSampler torus_sampler(const StructureGroup& grp, int n = 64) {
  StateSampler s;
  s.nodes = n;
  s.ambient = AmbientManifold::torus(1);
  s.group = grp;
  return s;
}

}  // namespace

TEST(PhaseSpace, SemidirectGroupLaws) {
  const AmbientManifold m = AmbientManifold::torus(1);
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(1);
  const LeftTransformer a = random_left_transformer(m, so3, rng);
  const LeftTransformer b = random_left_transformer(m, so3, rng);
  const LeftTransformer c = random_left_transformer(m, so3, rng);
  const LeftTransformer id = LeftTransformer::identity(m, so3);
  EXPECT_LT(max_pointwise_gap(semidirect_compose(a, id), a, rng, 20), 1e-15);
  EXPECT_LT(max_pointwise_gap(semidirect_compose(semidirect_inverse(a), a), id, rng, 100), 1e-10);
  EXPECT_LT(max_pointwise_gap(semidirect_compose(semidirect_compose(a, b), c),
                              semidirect_compose(a, semidirect_compose(b, c)), rng, 100),
            1e-10);
}

TEST(PhaseSpace, TransformerDerivativesAreConsistent) {
  const AmbientManifold m = AmbientManifold::euclidean(2);
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(2);
  const LeftAlgebraElement xi = random_left_element(m, so3, rng, 2, 0.3);
  const LeftTransformer f = LeftTransformer::flow(m, so3, xi, 0.7);
  const LeftTransformer inv = semidirect_inverse(f);
  std::vector<Eigen::VectorXd> probes{Eigen::Vector2d(0.2, -0.1), Eigen::Vector2d(-0.5, 0.4)};
  EXPECT_LT(inv.consistency_residual(probes), 1e-6);
  Eigen::Matrix2d a;
  a << 1.2, 0.3, -0.1, 0.9;
  const LeftTransformer lin = LeftTransformer::linear(m, so3, a, Eigen::Vector2d(0.1, 0.2));
  EXPECT_LT(semidirect_compose(lin, f).consistency_residual(probes), 1e-6);
  // A wrong Jacobian is rejected.
  EXPECT_THROW(LeftTransformer(
                   m, so3,
                   [&](const Eigen::VectorXd& x) {
                     return LeftEvaluation{2 * x, Eigen::MatrixXd::Identity(2, 2), so3.identity(),
                                           Eigen::MatrixXd::Zero(3, 2)};
                   },
                   [](const Eigen::VectorXd& y) { Eigen::VectorXd x = y / 2; return x; },
                   probes),
               Error);
}

TEST(PhaseSpace, AutomorphismActionLaw) {
  const AmbientManifold m = AmbientManifold::euclidean(2);
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(3);
  const LeftTransformer id = LeftTransformer::identity(m, so3);
  const Eigen::VectorXd x = rng.normal_vector(2);
  const GroupElement g = random_group_element(so3, rng);
  EXPECT_LT(id.apply(x, g).second.distance(g), 1e-16);
  const GroupElement g0 = random_group_element(so3, rng);
  const auto [x1, a1] = LeftTransformer::constant_gauge(m, so3, g0).apply(x, so3.identity());
  EXPECT_LT(a1.distance(g0), 1e-16);
  const AmbientField twist =
      AmbientField::component(hermite_mode(Eigen::Vector2i(1, 1), Eigen::Vector2d::Zero(), 1.0), 2, 3);
  const LeftTransformer h1 =
      semidirect_compose(LeftTransformer::translation(m, so3, rng.normal_vector(2)),
                         LeftTransformer::exp_gauge(m, so3, twist));
  const LeftTransformer h2 = LeftTransformer::flow(m, so3, random_left_element(m, so3, rng, 1, 0.3), 1.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd y = rng.normal_vector(2);
    const GroupElement gy = random_group_element(so3, rng);
    const auto [ya, ga] = semidirect_compose(h1, h2).apply(y, gy);
    const auto [y2, g2] = h2.apply(y, gy);
    const auto [yb, gb] = h1.apply(y2, g2);
    EXPECT_LT((ya - yb).norm(), 1e-10);
    EXPECT_LT(ga.distance(gb), 1e-10);
  }
}

TEST(PhaseSpace, ActionsCommute) {
  for (const auto& grp : {StructureGroup::circle(), StructureGroup::rotation3()}) {
    CounterRng rng(4);
    const CotangentState z = random_state(torus_sampler(grp), rng);
    const LeftTransformer l = random_left_transformer(z.ambient, grp, rng, 0.15);
    const RightTransformer r = random_right_transformer(z.source, grp, rng);
    const CotangentState lr = coact_right(coact_left(l, z), r);
    const CotangentState rl = coact_left(l, coact_right(z, r));
    EXPECT_LT((lr.Q - rl.Q).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((lr.P - rl.P).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((lr.sigma - rl.sigma).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT(max_distance(lr.gamma, rl.gamma), 1e-8);
  }
}

TEST(PhaseSpace, TrivialActions) {
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(5);
  const CotangentState z = random_state(torus_sampler(so3, 32), rng);
  const CotangentState same = coact_left(LeftTransformer::identity(z.ambient, so3), z);
  EXPECT_EQ((same.P - z.P).cwiseAbs().maxCoeff(), 0.0);
  const GroupElement g0 = random_group_element(so3, rng);
  const CotangentState gauged = coact_left(LeftTransformer::constant_gauge(z.ambient, so3, g0), z);
  const CotangentState moved = coact_left(
      LeftTransformer::translation(z.ambient, so3, Eigen::VectorXd::Constant(1, 0.4)), gauged);
  for (int i = 0; i < z.nodes(); ++i) {
    EXPECT_LT((moved.P.row(i) - z.P.row(i)).norm(), 1e-15);
    EXPECT_LT((moved.sigma.row(i).transpose() - so3.coAd(g0.inverse(), z.sigma.row(i).transpose())).norm(), 1e-14);
    EXPECT_LT(gauged.gamma[i].distance(g0 * z.gamma[i]), 1e-15);
  }
  const RightTransformer rid{GridDiffeo::identity(z.source), GroupField(32, so3.identity())};
  const CotangentState r0 = coact_right(z, rid);
  EXPECT_EQ((r0.Q - z.Q).cwiseAbs().maxCoeff(), 0.0);
  const RightTransformer rb{GridDiffeo::identity(z.source), GroupField(32, g0)};
  const CotangentState r1 = coact_right(z, rb);
  EXPECT_EQ((r1.P - z.P).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((r1.sigma - z.sigma).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 0; i < 32; ++i) EXPECT_LT(r1.gamma[i].distance(z.gamma[i] * g0), 1e-15);
  const RightTransformer rs{GridDiffeo::shift(z.source, 2 * z.source.spacing()), GroupField(32, so3.identity())};
  const CotangentState r2 = coact_right(z, rs);
  for (int i = 0; i < 32; ++i) EXPECT_LT(std::abs(r2.P(i, 0) - z.P((i + 2) % 32, 0)), 1e-15);
}

TEST(PhaseSpace, CotangentLiftsPreservePairing) {
  for (const auto& grp : {StructureGroup::circle(), StructureGroup::rotation3()}) {
    CounterRng rng(6);
    const CotangentState z = random_state(torus_sampler(grp), rng);
    StateTangent v = zero_tangent(z);
    v.dQ = random_band_limited(z.source, 1, 3, 1.0, rng);
    v.eta = random_band_limited(z.source, grp.dim(), 3, 1.0, rng);
    const LeftTransformer l = random_left_transformer(z.ambient, grp, rng);
    const double base = pairing(z, v);
    EXPECT_NEAR(pairing(coact_left(l, z), tangent_lift_left(l, z, v)), base, 1e-8);
    const RightTransformer r = random_right_transformer(z.source, grp, rng);
    EXPECT_NEAR(pairing(coact_right(z, r), tangent_lift_right(z, r, v)), base, 1e-8);
    // Bilinearity.
    StateTangent w = v;
    w.dQ *= 2.5;
    w.eta *= 2.5;
    EXPECT_NEAR(pairing(z, w), 2.5 * base, 1e-12 * std::max(1.0, std::abs(base)));
    EXPECT_EQ(pairing(z, zero_tangent(z)), 0.0);
  }
}

TEST(PhaseSpace, RegularityPreserved) {
  const StructureGroup so3 = StructureGroup::rotation3();
  CounterRng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const CotangentState z = random_state(torus_sampler(so3, 32), rng);
    ASSERT_TRUE(is_regular(z));
    EXPECT_TRUE(is_regular(coact_left(random_left_transformer(z.ambient, so3, rng), z)));
    EXPECT_TRUE(is_regular(coact_right(z, random_right_transformer(z.source, so3, rng))));
    EXPECT_GT(embedding_margin(z), 1e-6);
  }
}

TEST(PhaseSpace, GeneratorsMatchFlowDifferences) {
  for (const auto& m : {AmbientManifold::torus(1), AmbientManifold::euclidean(2)}) {
    const StructureGroup so3 = StructureGroup::rotation3();
    CounterRng rng(8);
    StateSampler opts = torus_sampler(so3, 32);
    opts.ambient = m;
    const CotangentState z = random_state(opts, rng);
    const LeftAlgebraElement xi = random_left_element(m, so3, rng, 2, 0.4);
    const double eps = 1e-5;
    const StateTangent fd = central_difference(coact_left(LeftTransformer::flow(m, so3, xi, eps), z),
                                               coact_left(LeftTransformer::flow(m, so3, xi, -eps), z), eps);
    const StateTangent an = cotangent_generator_left(xi, z);
    EXPECT_LT(max_abs(fd - an) / max_abs(an), 1e-6);
    const StateTangent base = generator_left(xi, z);
    EXPECT_LT((base.dQ - an.dQ).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((base.eta - an.eta).cwiseAbs().maxCoeff(), 1e-15);

    // Right: psi_eps = id + eps v (exact flow not needed at first order), b = exp(eps zeta).
    const RightAlgebraElement rho = random_right_element(z.source, so3, rng);
    auto right_step = [&](double e) {
      const GridDiffeo psi = GridDiffeo::from_lift(z.source, z.source.nodes() + e * rho.v);
      return coact_right(z, RightTransformer{psi, exp_field(so3, e * rho.zeta)});
    };
    const StateTangent rfd = central_difference(right_step(eps), right_step(-eps), eps);
    const StateTangent ran = cotangent_generator_right(rho, z);
    EXPECT_LT(max_abs(rfd - ran) / max_abs(ran), 1e-6);
  }
}

TEST(PhaseSpace, GeneratorSpecialCases) {
  const StructureGroup u1 = StructureGroup::circle();
  CounterRng rng(9);
  const CotangentState z = random_state(torus_sampler(u1, 32), rng);
  const StateTangent zero = generator_left(zero_left_element(z.ambient, u1), z);
  EXPECT_EQ(max_abs(zero), 0.0);
  // Constant gauge generator leaves momenta untouched in the abelian case.
  const LeftAlgebraElement c{AmbientField::zero(1, 1), AmbientField::constant(1, Eigen::VectorXd::Constant(1, 0.7))};
  const StateTangent t = cotangent_generator_left(c, z);
  EXPECT_EQ(t.dP.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(t.dsigma.cwiseAbs().maxCoeff(), 0.0);
  RightAlgebraElement pure{Eigen::VectorXd::Zero(32), random_band_limited(z.source, 1, 2, 1.0, rng)};
  const StateTangent r = generator_right(pure, z);
  EXPECT_EQ(r.dQ.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((r.eta - pure.zeta).cwiseAbs().maxCoeff(), 1e-15);
  // Point-cloud sources accept only v = 0.
  CotangentState pc = z;
  pc.source = SourceManifold::point_cloud(z.source.nodes(), z.source.weights());
  EXPECT_NO_THROW(generator_right(pure, pc));
  pure.v.setConstant(1.0);
  EXPECT_THROW(generator_right(pure, pc), PointCloudHasNoDerivative);
}
