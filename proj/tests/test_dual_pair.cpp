#include <cmath>

#include <gtest/gtest.h>

#include "epaut/dual_pair.hpp"
#include "epaut/random.hpp"

using namespace epaut;

namespace {

CotangentState sample(const AmbientManifold& m, const StructureGroup& grp, int n,
                      std::uint64_t seed) {
  StateSampler s;
  s.nodes = n;
  s.ambient = m;
  s.group = grp;
  CounterRng rng(seed);
  return random_state(s, rng);
}

ScalarBasisOptions centered(const CotangentState& z) {
  ScalarBasisOptions o;
  if (z.ambient.kind() == AmbientKind::euclidean) o.center = z.Q.colwise().mean().transpose();
  return o;
}

std::vector<StructureGroup> groups() {
  return {StructureGroup::circle(), StructureGroup::rotation3()};
}

std::vector<AmbientManifold> ambients() {
  return {AmbientManifold::torus(1), AmbientManifold::euclidean(2)};
}

}  // namespace

TEST(Symplectic, ChartMatchesOneFormDerivative) {
  for (const auto& m : ambients())
    for (const auto& grp : groups()) {
      const CotangentState z = sample(m, grp, 8, 11);
      const ChartValidation v = validate_chart(z, 3, 12);
      EXPECT_LT(v.canonical_block_error, 1e-7);
      EXPECT_LT(v.group_block_error, 1e-7);
      EXPECT_LT(v.mixed_error, 1e-7);
    }
}

TEST(Symplectic, MatrixIsAntisymmetricAndNondegenerate) {
  const CotangentState z = sample(AmbientManifold::torus(1), StructureGroup::rotation3(), 8, 12);
  const SymplecticChart c = assemble_chart(z);
  EXPECT_LT((c.omega + c.omega.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(c.condition_number, 1e6);
  const StateLayout lay(z);
  CounterRng rng(1);
  const StateTangent a = lay.unflatten(rng.normal_vector(lay.size()));
  const StateTangent b = lay.unflatten(rng.normal_vector(lay.size()));
  EXPECT_NEAR(omega_pair(z, a, b), lay.flatten(a).dot(c.omega * lay.flatten(b)), 1e-12);
}

TEST(Symplectic, GeneratorsAreHamiltonianForMomenta) {
  // dJ(xi) . v = Omega(X_xi, v) on both sides.
  for (const auto& m : ambients())
    for (const auto& grp : groups()) {
      // Products with a non-abelian gauge field alias on coarse grids.
      const CotangentState z = sample(m, grp, grp.dim() == 1 ? 16 : 64, 13);
      const SymplecticChart c = assemble_chart(z, false);
      const auto lb = left_basis(m, grp, 2, centered(z));
      const GeneratorBasis xl = left_generator_basis(z, lb);
      const Eigen::MatrixXd dl = djl(z, lb);
      const Eigen::MatrixXd hl = xl.columns.transpose() * c.omega;
      EXPECT_LT((dl - hl).norm() / dl.norm(), 1e-10);
      const auto rb = right_basis(z.source, grp, 3);
      const GeneratorBasis xr = right_generator_basis(z, rb);
      const Eigen::MatrixXd dr = djr(z, rb);
      const Eigen::MatrixXd hr = xr.columns.transpose() * c.omega;
      EXPECT_LT((dr - hr).norm() / dr.norm(), 1e-10);
    }
}

TEST(DualPair, OrbitsAreSymplecticallyOrthogonal) {
  for (const auto& m : ambients())
    for (const auto& grp : groups()) {
      const CotangentState z = sample(m, grp, 32, 14);
      const SymplecticChart c = assemble_chart(z, false);
      const GeneratorBasis xl = left_generator_basis(z, left_basis(m, grp, 8, centered(z)));
      const GeneratorBasis xr = right_generator_basis(z, right_basis(z.source, grp, 7));
      EXPECT_LT(orthogonality_residual(xl, xr, c.omega), 1e-8);
    }
}

TEST(DualPair, KernelsContainOpposingOrbits) {
  for (const auto& m : ambients())
    for (const auto& grp : groups()) {
      const CotangentState z = sample(m, grp, 48, 16);
      const auto lb = left_basis(m, grp, 8, centered(z));
      const GeneratorBasis xl = left_generator_basis(z, lb);
      const GeneratorBasis xr = right_generator_basis(z, right_basis(z.source, grp, 7));
      const SubspaceReport r = kernel_vs_orbit(z, djr(z), xl);
      EXPECT_LT(r.inclusion_residual, 1e-8);
      const SubspaceReport l = kernel_vs_orbit(z, djl(z, lb), xr);
      EXPECT_LT(l.inclusion_residual, 1e-8);
      EXPECT_GE(r.excess, 0);
    }
}

TEST(DualPair, UncoveredKernelShrinksWithTruncation) {
  const AmbientManifold m = AmbientManifold::torus(1);
  const StructureGroup grp = StructureGroup::rotation3();
  const CotangentState z = sample(m, grp, 32, 17);
  const Eigen::MatrixXd jrz = djr(z);
  double prev = 1e300;
  for (int k = 2; k <= 12; k += 2) {
    const SubspaceReport r =
        kernel_vs_orbit(z, jrz, left_generator_basis(z, left_basis(m, grp, k)));
    EXPECT_LE(r.uncovered_dimension, prev + 1e-8);
    EXPECT_GE(r.uncovered_dimension, -1e-8);
    prev = r.uncovered_dimension;
  }
}

TEST(DualPair, DegenerateNodeRaisesExcess) {
  for (const auto& grp : groups()) {
    StateSampler opts;
    opts.nodes = 6;
    opts.ambient = AmbientManifold::euclidean(2);
    opts.group = grp;
    opts.radius_max = 0.8;
    CounterRng rng(18);
    const CotangentState z = random_point_cloud_state(opts, rng);
    const auto lb = left_basis(z.ambient, grp, 6);
    const SubspaceReport regular = kernel_vs_orbit(z, djr(z), left_generator_basis(z, lb));
    EXPECT_EQ(regular.excess, 0);
    CotangentState zd = z;
    zd.P.row(3).setZero();
    zd.sigma.row(3).setZero();
    EXPECT_FALSE(is_regular(zd));
    EXPECT_THROW(kernel_vs_orbit(zd, djr(zd), left_generator_basis(zd, lb)), NotRegular);
    const SubspaceReport degenerate =
        compare_subspaces(djr(zd), left_generator_basis(zd, lb).columns);
    EXPECT_LT(degenerate.inclusion_residual, 1e-12);
    EXPECT_EQ(degenerate.excess, 2);
  }
}

TEST(DualPair, SingleNodeAbelianCounts) {
  // One node, U(1): J_R = (nu) only on a point cloud, kernel = {dsigma = 0}.
  const StructureGroup grp = StructureGroup::circle();
  CotangentState z = sample(AmbientManifold::euclidean(2), grp, 4, 19);
  CotangentState one{SourceManifold::point_cloud(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)),
                     z.ambient, grp, z.Q.topRows(1), z.P.topRows(1),
                     GroupField(z.gamma.begin(), z.gamma.begin() + 1), z.sigma.topRows(1)};
  const Eigen::MatrixXd j = djr(one);
  EXPECT_EQ(j.rows(), 1);
  const SubspaceReport r = compare_subspaces(j, Eigen::MatrixXd::Zero(StateLayout(one).size(), 0));
  EXPECT_EQ(r.jacobian_rank, 1);
  EXPECT_EQ(r.kernel_dim, 2 * 2 + 2 - 1);
}

TEST(DualPair, RightBasisLayout) {
  const SourceManifold s = SourceManifold::periodic_grid(16);
  const auto b = right_basis(s, StructureGroup::rotation3(), 3);
  EXPECT_EQ(b.size(), 7u * 4u);
  EXPECT_EQ(b[0].v.size(), 16);
  EXPECT_DOUBLE_EQ(b[7].zeta(5, 0), 1.0);
}
