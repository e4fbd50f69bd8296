#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "epaut/field_io.hpp"
#include "epaut/random.hpp"
#include "epaut/suites.hpp"

using namespace epaut;

TEST(ParallelMap, KeepsIndexOrderAndRethrows) {
  for (int threads : {1, 4}) {
    const auto v = parallel_map<int>(50, threads, [](int i) { return i * i; });
    ASSERT_EQ(v.size(), 50u);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(v[i], i * i);
    EXPECT_THROW(parallel_map<int>(8, threads,
                                   [](int i) -> int {
                                     if (i == 5) throw std::runtime_error("x");
                                     return i;
                                   }),
                 std::runtime_error);
  }
}

TEST(SuiteReport, Relations) {
  SuiteReport r;
  r.less("a", 1.0, 2.0);
  r.at_least("b", 2.0, 2.0);
  r.within("c", 1.9, 1.7, 2.3);
  EXPECT_TRUE(r.passed());
  r.within("d", 2.4, 1.7, 2.3);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.summary().rfind("FAIL", 0), 0u);
  r.seconds = 5.0;
  r.runtime(0.0);
  EXPECT_EQ(r.checks.size(), 4u);
  r.runtime(1.0);
  EXPECT_FALSE(r.checks.back().passed);
}

TEST(ChartField, QuadraticMomentum) {
  // h = |p|^2 / 2 + sigma_3: dq = p, dp = 0, eta = e_3, dsigma = -coad(e_3, sigma).
  const StructureGroup so3 = StructureGroup::rotation3();
  const Eigen::VectorXi zero = Eigen::VectorXi::Zero(2);
  Eigen::VectorXi p1(2), p2(2);
  p1 << 2, 0;
  p2 << 0, 2;
  const Observable h = Observable::monomial(zero, false, p1, {}, 3).scaled(0.5) +
                       Observable::monomial(zero, false, p2, {}, 3).scaled(0.5) +
                       Observable::monomial(zero, false, zero, {2}, 3);
  CounterRng rng(1);
  const PhasePoint x{rng.normal_vector(2), rng.normal_vector(2), rng.normal_vector(3),
                     random_group_element(so3, rng)};
  const PhaseTangent t = chart_hamiltonian_field(h, x, so3);
  const Eigen::Vector3d e3(0, 0, 1);
  EXPECT_LT((t.dq - x.p).norm(), 1e-8);
  EXPECT_LT(t.dp.norm(), 1e-8);
  EXPECT_LT((t.eta - e3).norm(), 1e-8);
  EXPECT_LT((t.dsigma + so3.coad(e3, x.sigma)).norm(), 1e-8);
}

TEST(FieldIo, StateCsvLayout) {
  EnsembleSampler s;
  s.nodes = 3;
  CounterRng rng(2);
  const CotangentState z = random_ensemble(s, rng);
  std::ostringstream out;
  write_state_csv(out, z, R"({"t":0})");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, R"(# {"t":0})");
  std::getline(in, line);
  EXPECT_EQ(line, "i,x,w,Q1,P1,sigma1,sigma2,sigma3,g1,g2,g3,g4,g5,g6,g7,g8,g9");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}
