#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epaut/yang_mills.hpp"

namespace epaut {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<", ">=", "in"
  std::string unit;
  bool passed = false;
  double upper = 0.0;    // second bound for "in"
};

struct Metric {
  std::string name;
  double value = 0.0;
  std::string unit;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Metric> metrics;
  double seconds = 0.0;

  bool passed() const;
  void less(const std::string& name, double value, double limit, const std::string& unit = "1");
  void at_least(const std::string& name, double value, double limit, const std::string& unit = "1");
  void within(const std::string& name, double value, double lo, double hi,
              const std::string& unit = "1");
  void metric(const std::string& name, double value, const std::string& unit = "1");
  // Appends a runtime check against `limit` seconds using `seconds`; none when limit <= 0.
  void runtime(double limit);
  // One line: PASS/FAIL, the suite name and every check.
  std::string summary() const;
};

// Runs fn(0..count-1) on up to `threads` workers; results are kept in index order,
// so reductions do not depend on the thread count.
template <class T, class F>
std::vector<T> parallel_map(int count, int threads, F fn);

struct OrthogonalityOptions {
  std::uint64_t seed = 42;
  int states = 20;
  int nodes = 32;
  int k = 8;
  int kr = 7;
  double tol = 1e-8;
  double time_limit = 30.0;
  int threads = 1;
};
SuiteReport orthogonality_suite(const OrthogonalityOptions& o = {});

struct InclusionOptions {
  std::uint64_t seed = 42;
  int nodes = 64;
  std::vector<int> ks = {4, 8, 12};
  int kr = 3;
  double tol = 1e-8;
  double monotone_slack = 0.10;
  double time_limit = 120.0;
  int threads = 1;
};
SuiteReport inclusion_suite(const InclusionOptions& o = {});

struct DegeneracyOptions {
  std::uint64_t seed = 42;
  int nodes = 6;
  int k = 6;
  int zeroed_node = 3;
  double time_limit = 30.0;
};
SuiteReport degeneracy_suite(const DegeneracyOptions& o = {});

struct IsotropyOptions {
  std::uint64_t seed = 42;
  int targets = 10;
  int nodes = 64;
  double residual_tol = 1e-4;
  double fraction_tol = 1e-3;
  int threads = 1;
};
SuiteReport isotropy_suite(const IsotropyOptions& o = {});

struct ConservationOptions {
  std::uint64_t seed = 42;
  int nodes = 5;
  double dt = 1e-3;
  double t_end = 10.0;
  double alpha1 = 1.0, alpha2 = 1.0;
  double energy_tol = 1e-8;
  double charge_tol = 1e-8;
  double casimir_tol = 1e-10;
  double time_limit = 60.0;
};
SuiteReport conservation_suite(const ConservationOptions& o = {});

struct WeakConsistencyOptions {
  std::uint64_t seed = 42;
  int nodes = 5;
  double t_end = 0.2;
  std::vector<double> dts = {4e-3, 2e-3, 1e-3};
  double slope_lo = 1.7, slope_hi = 2.3;
};
SuiteReport weak_consistency_suite(const WeakConsistencyOptions& o = {});

struct DerivativeOptions {
  std::uint64_t seed = 42;
  int inputs = 50;
  int nodes = 64;
  double step = 1e-5;
  double tol = 1e-6;
  int threads = 1;
};
SuiteReport derivative_suite(const DerivativeOptions& o = {});

struct CocycleSuiteOptions {
  std::uint64_t seed = 42;
  int triples = 10;
  int d = 2;
  double scale = 0.15;
  double tol = 1e-6;
  int threads = 1;
};
SuiteReport cocycle_suite(const CocycleSuiteOptions& o = {});

struct VolDualPairOptions {
  std::uint64_t seed = 42;
  int states = 2;        // per structure group
  int nodes = 64;
  double dt = 1e-3;
  double t_end = 1.0;
  int observable_modes = 2;
  int kr = 2;
  double noether_tol = 1e-6;
  double invariance_tol = 1e-8;
  double orthogonality_tol = 1e-8;
  bool noether = true;   // the flow part dominates the cost
  int threads = 1;
};
SuiteReport vol_dual_pair_suite(const VolDualPairOptions& o = {});

struct ReconstructionOptions {
  std::uint64_t seed = 42;
  int trials = 3;
  int nodes = 64;
  double tol = 1e-6;
};
SuiteReport reconstruction_suite(const ReconstructionOptions& o = {});

// Hamiltonian field of h by canonical differences in exponential chart coordinates
// (q, theta; p, pi), g = exp(theta) g0, mapped back to (dq, dp, eta, dsigma).
PhaseTangent chart_hamiltonian_field(const Observable& h, const PhasePoint& x,
                                     const StructureGroup& grp, double step = 1e-5);

}  // namespace epaut

#include "epaut/suites_impl.hpp"
