#include "epaut/suites.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "epaut/dual_pair.hpp"
#include "epaut/errors.hpp"
#include "epaut/hamiltonian_flow.hpp"
#include "epaut/isotropy.hpp"
#include "epaut/peakons.hpp"
#include "epaut/random.hpp"
#include "epaut/reconstruct.hpp"

namespace epaut {

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void SuiteReport::less(const std::string& name, double value, double limit,
                       const std::string& unit) {
  checks.push_back({name, value, limit, "<", unit, value < limit});
}

void SuiteReport::at_least(const std::string& name, double value, double limit,
                           const std::string& unit) {
  checks.push_back({name, value, limit, ">=", unit, value >= limit});
}

void SuiteReport::within(const std::string& name, double value, double lo, double hi,
                         const std::string& unit) {
  checks.push_back({name, value, lo, "in", unit, value >= lo && value <= hi, hi});
}

void SuiteReport::metric(const std::string& name, double value, const std::string& unit) {
  metrics.push_back({name, value, unit});
}

void SuiteReport::runtime(double limit) {
  if (limit > 0) less("runtime", seconds, limit, "s");
}

std::string SuiteReport::summary() const {
  std::ostringstream out;
  out << (passed() ? "PASS " : "FAIL ") << suite << ":";
  for (const auto& c : checks) {
    out << " " << c.name << "=" << c.value << " (" << c.relation << " ";
    if (c.relation == "in")
      out << "[" << c.limit << ", " << c.upper << "]";
    else
      out << c.limit;
    out << (c.passed ? ")" : ", failed)");
  }
  return out.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SuiteReport start(const std::string& suite, std::uint64_t seed) {
  SuiteReport r;
  r.suite = suite;
  r.seed = seed;
  return r;
}

double worst(const std::vector<double>& v) {
  double w = 0.0;
  for (double x : v) w = std::max(w, x);
  return w;
}

// Streams are spaced so that suites with the same seed never share random numbers.
CounterRng stream(std::uint64_t seed, int suite, int index) {
  return CounterRng(seed, static_cast<std::uint64_t>(suite) * 100000 + index);
}

StructureGroup group_of(int i) {
  return i % 2 ? StructureGroup::rotation3() : StructureGroup::circle();
}

AmbientManifold ambient_of(int i) {
  return (i / 2) % 2 ? AmbientManifold::euclidean(2) : AmbientManifold::torus(1);
}

CotangentState grid_state(const AmbientManifold& m, const StructureGroup& grp, int n,
                          CounterRng& rng) {
  StateSampler s;
  s.nodes = n;
  s.ambient = m;
  s.group = grp;
  return random_state(s, rng);
}

ScalarBasisOptions centered(const CotangentState& z) {
  ScalarBasisOptions o;
  if (z.ambient.kind() == AmbientKind::euclidean) o.center = z.Q.colwise().mean().transpose();
  return o;
}

StateTangent smooth_tangent(const CotangentState& z, CounterRng& rng, int modes = 3,
                            double amplitude = 0.5) {
  const int d = z.ambient.dim(), m = z.group.dim();
  return {random_band_limited(z.source, d, modes, amplitude, rng),
          random_band_limited(z.source, d, modes, amplitude, rng),
          random_band_limited(z.source, m, modes, amplitude, rng),
          random_band_limited(z.source, m, modes, amplitude, rng)};
}

double relative(const Eigen::VectorXd& approx, const Eigen::VectorXd& exact) {
  return (approx - exact).norm() / std::max(exact.norm(), 1e-300);
}

Eigen::VectorXd flatten(const RightMomentum& j) {
  Eigen::VectorXd out(j.alpha.size() + j.nu.size());
  out.head(j.alpha.size()) = j.alpha;
  for (int i = 0; i < j.nu.rows(); ++i)
    out.segment(j.alpha.size() + i * j.nu.cols(), j.nu.cols()) = j.nu.row(i).transpose();
  return out;
}

Eigen::VectorXd flatten(const PhaseTangent& t) {
  Eigen::VectorXd out(t.dq.size() + t.dp.size() + t.eta.size() + t.dsigma.size());
  out << t.dq, t.dp, t.eta, t.dsigma;
  return out;
}

PhasePoint random_point(int d, const StructureGroup& grp, CounterRng& rng) {
  return {rng.normal_vector(d), rng.normal_vector(d), rng.normal_vector(grp.dim()),
          random_group_element(grp, rng)};
}

double lift_error(const GridDiffeo& a, const GridDiffeo& b) {
  const double two_pi = 2.0 * std::numbers::pi;
  const Eigen::VectorXd d = a.lift() - b.lift();
  const double turns = std::round(d(0) / two_pi);
  return (d.array() - turns * two_pi).abs().maxCoeff();
}

}  // namespace

PhaseTangent chart_hamiltonian_field(const Observable& h, const PhasePoint& x,
                                     const StructureGroup& grp, double step) {
  const int d = static_cast<int>(x.q.size()), m = grp.dim();
  const auto point = [&](const Eigen::VectorXd& c) -> PhasePoint {
    const Eigen::VectorXd theta = c.segment(2 * d, m), pi = c.segment(2 * d + m, m);
    return {c.head(d), c.segment(d, d), grp.dexp(theta).transpose().inverse() * pi,
            grp.exp(theta) * x.g};
  };
  Eigen::VectorXd c(2 * d + 2 * m);
  c << x.q, x.p, Eigen::VectorXd::Zero(m), x.sigma;
  Eigen::VectorXd grad(c.size());
  for (int k = 0; k < c.size(); ++k) {
    Eigen::VectorXd cp = c, cm = c;
    cp(k) += step;
    cm(k) -= step;
    const PhasePoint a = point(cp), b = point(cm);
    grad(k) = (h.value(a.q, a.p, a.sigma) - h.value(b.q, b.p, b.sigma)) / (2 * step);
  }
  Eigen::VectorXd field(c.size());
  field << grad.segment(d, d), -grad.head(d), grad.segment(2 * d + m, m), -grad.segment(2 * d, m);
  return central_difference(grp, point(c + step * field), point(c - step * field), step);
}

SuiteReport orthogonality_suite(const OrthogonalityOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("orthogonality", o.seed);
  const auto res = parallel_map<double>(o.states, o.threads, [&](int s) {
    CounterRng rng = stream(o.seed, 1, s);
    const CotangentState z = grid_state(ambient_of(s), group_of(s), o.nodes, rng);
    const SymplecticChart c = assemble_chart(z, false);
    const GeneratorBasis xl =
        left_generator_basis(z, left_basis(z.ambient, z.group, o.k, centered(z)));
    const GeneratorBasis xr = right_generator_basis(z, right_basis(z.source, z.group, o.kr));
    return orthogonality_residual(xl, xr, c.omega);
  });
  r.metric("states", o.states, "count");
  r.metric("nodes", o.nodes, "count");
  r.less("max_orthogonality_residual", worst(res), o.tol);
  r.seconds = since(t0);
  r.runtime(o.time_limit);
  return r;
}

SuiteReport inclusion_suite(const InclusionOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("inclusion", o.seed);
  struct Row {
    double right = 0.0, left = 0.0, growth = -std::numeric_limits<double>::infinity();
    std::vector<double> uncovered;
  };
  const auto rows = parallel_map<Row>(4, o.threads, [&](int s) {
    CounterRng rng = stream(o.seed, 2, s);
    const CotangentState z = grid_state(ambient_of(s), group_of(s), o.nodes, rng);
    const Eigen::MatrixXd jr_jac = djr(z);
    const GeneratorBasis xr = right_generator_basis(z, right_basis(z.source, z.group, o.kr));
    Row row;
    for (int k : o.ks) {
      const auto lb = left_basis(z.ambient, z.group, k, centered(z));
      const SubspaceReport rr = kernel_vs_orbit(z, jr_jac, left_generator_basis(z, lb));
      const SubspaceReport lr = kernel_vs_orbit(z, djl(z, lb), xr);
      row.right = std::max(row.right, rr.inclusion_residual);
      row.left = std::max(row.left, lr.inclusion_residual);
      if (!row.uncovered.empty()) {
        const double prev = row.uncovered.back();
        row.growth = std::max(row.growth, (rr.uncovered_dimension - prev) / std::max(prev, 1e-8));
      }
      row.uncovered.push_back(rr.uncovered_dimension);
    }
    return row;
  });
  double right = 0.0, left = 0.0, growth = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < rows.size(); ++s) {
    right = std::max(right, rows[s].right);
    left = std::max(left, rows[s].left);
    growth = std::max(growth, rows[s].growth);
    for (std::size_t k = 0; k < o.ks.size(); ++k)
      r.metric("uncovered_dimension[state=" + std::to_string(s) + ",K=" +
                   std::to_string(o.ks[k]) + "]",
               rows[s].uncovered[k], "dim");
  }
  r.less("max_dJR_left_generators", right, o.tol);
  r.less("max_dJL_right_generators", left, o.tol);
  r.less("max_relative_uncovered_growth", growth, o.monotone_slack);
  r.seconds = since(t0);
  r.runtime(o.time_limit);
  return r;
}

SuiteReport degeneracy_suite(const DegeneracyOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("degeneracy", o.seed);
  int regular_max = 0, degenerate_min = std::numeric_limits<int>::max();
  double inclusion = 0.0;
  for (int g = 0; g < 2; ++g) {
    StateSampler opts;
    opts.nodes = o.nodes;
    opts.ambient = AmbientManifold::euclidean(2);
    opts.group = group_of(g);
    opts.radius_max = 0.8;
    CounterRng rng = stream(o.seed, 3, g);
    const CotangentState z = random_point_cloud_state(opts, rng);
    const auto lb = left_basis(z.ambient, z.group, o.k);
    const SubspaceReport regular = kernel_vs_orbit(z, djr(z), left_generator_basis(z, lb));
    CotangentState zd = z;
    zd.P.row(o.zeroed_node).setZero();
    zd.sigma.row(o.zeroed_node).setZero();
    const SubspaceReport degenerate = compare_subspaces(djr(zd), left_generator_basis(zd, lb).columns);
    regular_max = std::max(regular_max, regular.excess);
    degenerate_min = std::min(degenerate_min, degenerate.excess);
    inclusion = std::max(inclusion, degenerate.inclusion_residual);
    const std::string tag = opts.group.dim() == 1 ? "[U1]" : "[SO3]";
    r.metric("regular_kernel_dim" + tag, regular.kernel_dim, "dim");
    r.metric("regular_orbit_rank" + tag, regular.orbit_rank, "dim");
    r.metric("degenerate_kernel_dim" + tag, degenerate.kernel_dim, "dim");
    r.metric("degenerate_orbit_rank" + tag, degenerate.orbit_rank, "dim");
  }
  r.metric("degenerate_inclusion_residual", inclusion);
  r.less("max_regular_excess", regular_max, 1, "dim");
  r.at_least("min_degenerate_excess", degenerate_min, 1, "dim");
  r.seconds = since(t0);
  r.runtime(o.time_limit);
  return r;
}

SuiteReport isotropy_suite(const IsotropyOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("isotropy", o.seed);
  struct Row {
    double residual, fraction;
  };
  const auto rows = parallel_map<Row>(o.targets, o.threads, [&](int t) {
    CounterRng rng = stream(o.seed, 4, t);
    const CotangentState z = grid_state(AmbientManifold::euclidean(2), group_of(t), o.nodes, rng);
    const Field target = random_conormal(z, rng.next());
    const IsotropyWitness w = isotropy_witness(z, target);
    double fraction = 0.0;
    for (int i = 0; i < z.nodes(); ++i) {
      const Eigen::VectorXd s = z.sigma.row(i).transpose();
      const double p2 = z.P.row(i).squaredNorm(), s2 = z.group.tau_star(s, s);
      const double tn = target.row(i).norm();
      if (tn == 0.0) continue;
      const double fp = p2 / (p2 + s2), fs = s2 / (p2 + s2);
      fraction = std::max(fraction, std::abs(w.term_p.row(i).norm() / tn - fp) / fp);
      fraction = std::max(fraction, std::abs(w.term_sigma.row(i).norm() / tn - fs) / fs);
    }
    return Row{w.residual, fraction};
  });
  double residual = 0.0, fraction = 0.0;
  for (const auto& row : rows) {
    residual = std::max(residual, row.residual);
    fraction = std::max(fraction, row.fraction);
  }
  r.metric("targets", o.targets, "count");
  r.less("max_witness_residual", residual, o.residual_tol, "momentum");
  r.less("max_relative_fraction_error", fraction, o.fraction_tol);
  r.seconds = since(t0);
  return r;
}

SuiteReport conservation_suite(const ConservationOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("conservation", o.seed);
  EnsembleSampler s;
  s.nodes = o.nodes;
  CounterRng rng = stream(o.seed, 5, 0);
  const CotangentState z = random_ensemble(s, rng);
  const KernelPair k{GreensKernel::line(o.alpha1), GreensKernel::line(o.alpha2)};
  const int stride = std::max(1, static_cast<int>(std::lround(0.1 / o.dt)));
  const EnsembleTrajectory traj = simulate(z, k, o.dt, o.t_end, stride);
  r.metric("steps", std::lround(o.t_end / o.dt), "count");
  r.metric("initial_energy", traj.energy.front(), "energy");
  r.less("relative_energy_drift", traj.max_energy_drift(), o.energy_tol);
  r.less("max_charge_drift", traj.max_charge_drift(), o.charge_tol, "charge");
  r.less("max_casimir_drift", traj.max_casimir_drift(), o.casimir_tol, "charge");
  r.seconds = since(t0);
  r.runtime(o.time_limit);
  return r;
}

SuiteReport weak_consistency_suite(const WeakConsistencyOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("weak_consistency", o.seed);
  EnsembleSampler s;
  s.nodes = o.nodes;
  CounterRng rng = stream(o.seed, 6, 0);
  const CotangentState z = random_ensemble(s, rng);
  const std::vector<LeftAlgebraElement> tests = {
      random_left_element(s.ambient, s.group, rng, 3, 0.5),
      random_left_element(s.ambient, s.group, rng, 3, 0.5)};
  const KernelPair k{GreensKernel::line(1.0), GreensKernel::line(0.7)};
  Eigen::VectorXd x(o.dts.size()), y(o.dts.size());
  for (std::size_t i = 0; i < o.dts.size(); ++i) {
    const double res = weak_consistency(simulate(z, k, o.dts[i], o.t_end, 1, tests), k, tests);
    r.metric("residual[dt=" + std::to_string(o.dts[i]) + "]", res, "momentum/time");
    x(i) = std::log(o.dts[i]);
    y(i) = std::log(res);
  }
  // Least-squares slope of log residual against log dt.
  const double xm = x.mean(), ym = y.mean();
  const double slope = ((x.array() - xm) * (y.array() - ym)).sum() / (x.array() - xm).square().sum();
  r.within("convergence_order", slope, o.slope_lo, o.slope_hi);
  r.seconds = since(t0);
  return r;
}

SuiteReport derivative_suite(const DerivativeOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("derivatives", o.seed);
  const double h = o.step;
  const SourceManifold grid = SourceManifold::periodic_grid(o.nodes);

  const auto logderiv = parallel_map<double>(o.inputs, o.threads, [&](int i) {
    CounterRng rng = stream(o.seed, 7, i);
    const StructureGroup grp = group_of(i);
    const GroupField g = exp_field(grp, random_band_limited(grid, grp.dim(), 2, 0.6, rng));
    const Field j = random_band_limited(grid, grp.dim(), 3, 0.7, rng);
    const Field fd = (logderiv_right(grid, grp, multiply(exp_field(grp, h * j), g)) -
                      logderiv_right(grid, grp, multiply(exp_field(grp, -h * j), g))) /
                     (2 * h);
    const Field an = d_logderiv(grid, grp, g, j);
    return (fd - an).norm() / an.norm();
  });

  const auto hvf = parallel_map<double>(o.inputs, o.threads, [&](int i) {
    CounterRng rng = stream(o.seed, 7, 1000 + i);
    const StructureGroup grp = group_of(i);
    const Observable obs = random_observable(2, grp.dim(), rng.next(), 0.5);
    const PhasePoint x = random_point(2, grp, rng);
    return relative(flatten(trivialized_hvf(obs, x, grp)),
                    flatten(chart_hamiltonian_field(obs, x, grp, h)));
  });

  const auto djr_vol = parallel_map<double>(o.inputs, o.threads, [&](int i) {
    CounterRng rng = stream(o.seed, 7, 2000 + i);
    const VolState z = random_vol_state(o.nodes, 2, group_of(i), rng);
    const StateTangent v = smooth_tangent(z, rng);
    const Eigen::VectorXd fd =
        (flatten(jr_vol(perturb(z, v, h))) - flatten(jr_vol(perturb(z, v, -h)))) / (2 * h);
    return relative(fd, flatten(d_jr_vol(z, v)));
  });

  const auto djl_err = parallel_map<double>(o.inputs, o.threads, [&](int i) {
    CounterRng rng = stream(o.seed, 7, 3000 + i);
    const CotangentState z = grid_state(ambient_of(i), group_of(i), o.nodes / 2, rng);
    const auto lb = left_basis(z.ambient, z.group, 4, centered(z));
    const StateTangent v = smooth_tangent(z, rng);
    const DiracMomentum plus = jl(perturb(z, v, h)), minus = jl(perturb(z, v, -h));
    Eigen::VectorXd fd(lb.size());
    for (std::size_t b = 0; b < lb.size(); ++b)
      fd(b) = (jl_eval(plus, lb[b]) - jl_eval(minus, lb[b])) / (2 * h);
    return relative(fd, djl(z, lb) * StateLayout(z).flatten(v));
  });

  const auto djr_err = parallel_map<double>(o.inputs, o.threads, [&](int i) {
    CounterRng rng = stream(o.seed, 7, 4000 + i);
    const CotangentState z = grid_state(ambient_of(i), group_of(i), o.nodes / 2, rng);
    const StateTangent v = smooth_tangent(z, rng);
    const Eigen::VectorXd fd =
        (flatten(jr(perturb(z, v, h))) - flatten(jr(perturb(z, v, -h)))) / (2 * h);
    return relative(fd, djr(z) * StateLayout(z).flatten(v));
  });

  r.metric("inputs_per_family", o.inputs, "count");
  r.metric("fd_step", h);
  r.less("d_logderiv_rel_error", worst(logderiv), o.tol);
  r.less("trivialized_hvf_rel_error", worst(hvf), o.tol);
  r.less("d_jr_vol_rel_error", worst(djr_vol), o.tol);
  r.less("djl_rel_error", worst(djl_err), o.tol);
  r.less("djr_rel_error", worst(djr_err), o.tol);
  r.seconds = since(t0);
  return r;
}

SuiteReport cocycle_suite(const CocycleSuiteOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("cocycle", o.seed);
  struct Row {
    double identity, base_point, trivial;
  };
  const auto rows = parallel_map<Row>(o.triples, o.threads, [&](int t) {
    CounterRng rng = stream(o.seed, 8, t);
    const StructureGroup grp = group_of(t);
    const auto flow = [&] {
      return SymplecticMap(
          HamiltonianFlow(random_observable(o.d, grp.dim(), rng.next(), o.scale), grp));
    };
    const SymplecticMap f1 = flow(), f2 = flow(), f3 = flow();
    const PhasePoint p0 = random_point(o.d, grp, rng);
    PhasePoint p1 = random_point(o.d, grp, rng);
    p1.g = grp.exp(0.5 * rng.normal_vector(grp.dim())) * p0.g;

    const SymplecticMap f12 = compose(f1, f2);
    const double b12 = cocycle_B(f1, f2, p0);
    const double lhs = b12 + cocycle_B(f12, f3, p0);
    const double rhs = cocycle_B(f2, f3, p0) + cocycle_B(f1, compose(f2, f3), p0);
    const double diff = cocycle_B(f1, f2, p1) - b12;
    const double cob = coboundary_term(f12, p0, p1) - coboundary_term(f1, p0, p1) -
                       coboundary_term(f2, p0, p1);
    const double trivial = cocycle_B(SymplecticMap::identity(grp), f1, p0);
    return Row{std::abs(lhs - rhs), std::abs(diff - cob), std::abs(trivial)};
  });
  double identity = 0.0, base = 0.0, trivial = 0.0;
  for (const auto& row : rows) {
    identity = std::max(identity, row.identity);
    base = std::max(base, row.base_point);
    trivial = std::max(trivial, row.trivial);
  }
  r.metric("triples", o.triples, "count");
  r.less("max_cocycle_identity_residual", identity, o.tol, "action");
  r.less("max_base_point_coboundary_residual", base, o.tol, "action");
  r.less("max_identity_flow_B", trivial, CocycleOptions{}.tol, "action");
  r.seconds = since(t0);
  return r;
}

SuiteReport vol_dual_pair_suite(const VolDualPairOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("vol_dual_pair", o.seed);
  struct Row {
    double noether = 0.0, invariance = 0.0, orthogonality = 0.0, kernel = 0.0;
  };
  const int count = 2 * o.states;
  const auto rows = parallel_map<Row>(count, o.threads, [&](int s) {
    CounterRng rng = stream(o.seed, 9, s);
    const StructureGroup grp = group_of(s);
    const int m = grp.dim();
    const VolState z = random_vol_state(o.nodes, 2, grp, rng);
    Row row;

    for (const auto& h : observable_basis(2, m, o.observable_modes, 2, true)) {
      const double before = jl_vol(z, h);
      for (int k = 0; k < 2; ++k) {
        const RightTransformer t = random_right_transformer(z.source, grp, rng, 0.0, 0.4, true);
        row.invariance = std::max(row.invariance, std::abs(jl_vol(act_right_vol(z, t), h) - before));
      }
    }

    const auto right = vol_right_basis(z.source, grp, o.kr);
    for (int k = 0; k < 4; ++k) {
      const Observable h = random_observable(2, m, rng.next(), 0.5);
      const StateTangent a = chromo_generator(h, z);
      const RightMomentum dj = d_jr_vol(z, a);
      row.kernel = std::max({row.kernel, std::abs(quadrature(z.source, dj.alpha)),
                             dj.nu.cwiseAbs().maxCoeff()});
      for (const auto& xi : right) {
        const StateTangent b = vol_right_generator(xi, z);
        const double scale = max_abs(a) * max_abs(b);
        row.orthogonality =
            std::max(row.orthogonality, std::abs(omega_bar(z, a, b)) / std::max(scale, 1e-300));
      }
    }

    if (o.noether) {
      const RightMomentum j0 = jr_vol(z);
      HamiltonianFlow(random_observable(2, m, rng.next()), grp, o.t_end)
          .sample(z, o.dt, [&](double, const VolState& zt) {
            row.noether = std::max(row.noether, class_distance(z.source, jr_vol(zt), j0));
          });
    }
    return row;
  });
  Row w;
  for (const auto& row : rows) {
    w.noether = std::max(w.noether, row.noether);
    w.invariance = std::max(w.invariance, row.invariance);
    w.orthogonality = std::max(w.orthogonality, row.orthogonality);
    w.kernel = std::max(w.kernel, row.kernel);
  }
  r.metric("states", count, "count");
  r.metric("max_chromo_kernel_residual", w.kernel, "momentum");
  if (o.noether) r.less("max_jr_vol_drift", w.noether, o.noether_tol, "momentum");
  r.less("max_jl_vol_right_drift", w.invariance, o.invariance_tol, "momentum");
  r.less("max_omega_bar_orthogonality", w.orthogonality, o.orthogonality_tol);
  r.seconds = since(t0);
  return r;
}

SuiteReport reconstruction_suite(const ReconstructionOptions& o) {
  const auto t0 = Clock::now();
  SuiteReport r = start("reconstruction", o.seed);
  double right = 0.0, vol = 0.0;
  int attempted = 0, rejected = 0;
  const auto reject = [&](auto&& call) {
    ++attempted;
    try {
      call();
    } catch (const NotInLevelSet&) {
      ++rejected;
    } catch (const ImagesDiffer&) {
      ++rejected;
    } catch (const NotVolumePreserving&) {
      ++rejected;
    }
  };
  for (int t = 0; t < 4 * o.trials; ++t) {
    CounterRng rng = stream(o.seed, 10, t);
    const CotangentState z1 = grid_state(ambient_of(t), group_of(t), o.nodes, rng);
    const RightTransformer tr = random_right_transformer(z1.source, z1.group, rng);
    const RightReconstruction rec = reconstruct_right(z1, coact_right(z1, tr));
    right = std::max({right, lift_error(rec.transformer.psi, tr.psi),
                      max_distance(rec.transformer.b, tr.b), rec.verify_error});
    if (t % 4 == 0) {
      CotangentState bumped = z1;
      bumped.P.array() += 1e-3;
      reject([&] { reconstruct_right(z1, bumped); });
    }
  }
  for (int t = 0; t < 2 * o.trials; ++t) {
    CounterRng rng = stream(o.seed, 10, 1000 + t);
    const VolState z1 = random_vol_state(o.nodes, 2, group_of(t), rng);
    const RightTransformer tr = random_right_transformer(z1.source, z1.group, rng, 0.0, 0.4, true);
    const RightReconstruction rec = reconstruct_vol(z1, act_right_vol(z1, tr));
    vol = std::max({vol, lift_error(rec.transformer.psi, tr.psi),
                    max_distance(rec.transformer.b, tr.b), rec.verify_error});
    if (t % 2 == 0) {
      VolState bumped = z1;
      bumped.P.array() += 1e-3;
      reject([&] { reconstruct_vol(z1, bumped); });
      const RightTransformer warp = random_right_transformer(z1.source, z1.group, rng, 0.15, 0.4, false);
      reject([&] { reconstruct_vol(z1, act_right_vol(z1, warp)); });
    }
  }
  r.metric("rejections_attempted", attempted, "count");
  r.less("max_right_round_trip_error", right, o.tol);
  r.less("max_vol_round_trip_error", vol, o.tol);
  r.at_least("rejected_fraction", attempted ? double(rejected) / attempted : 0.0, 1.0);
  r.seconds = since(t0);
  return r;
}

}  // namespace epaut
