#include "epaut/peakons.hpp"

#include <cmath>
#include <numbers>

#include "epaut/errors.hpp"

namespace epaut {

namespace {

constexpr double kPi = std::numbers::pi;

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

Eigen::VectorXd node(const Field& f, int i) { return f.row(i).transpose(); }

}  // namespace

GreensKernel::GreensKernel(KernelKind kind, double alpha) : kind_(kind), alpha_(alpha) {
  if (!(alpha > 0)) throw ConfigInvalid("kernel length scale must be positive");
}

double GreensKernel::value(const Eigen::VectorXd& x) const {
  const double a = alpha_;
  switch (kind_) {
    case KernelKind::line:
      return std::exp(-std::abs(x(0)) / a) / (2 * a);
    case KernelKind::circle:
      return std::cosh((std::abs(x(0)) - kPi) / a) / (2 * a * std::sinh(kPi / a));
    case KernelKind::gaussian:
      return std::exp(-x.squaredNorm() / (2 * a * a));
  }
  return 0.0;
}

Eigen::VectorXd GreensKernel::gradient(const Eigen::VectorXd& x) const {
  const double a = alpha_;
  switch (kind_) {
    case KernelKind::line:
      return Eigen::VectorXd::Constant(1, -sign(x(0)) * std::exp(-std::abs(x(0)) / a) / (2 * a * a));
    case KernelKind::circle:
      return Eigen::VectorXd::Constant(
          1, sign(x(0)) * std::sinh((std::abs(x(0)) - kPi) / a) / (2 * a * a * std::sinh(kPi / a)));
    case KernelKind::gaussian:
      return -x / (a * a) * value(x);
  }
  return Eigen::VectorXd::Zero(x.size());
}

std::string GreensKernel::name() const {
  switch (kind_) {
    case KernelKind::line: return "line";
    case KernelKind::circle: return "circle";
    case KernelKind::gaussian: return "gaussian";
  }
  return "";
}

void check_kernels(const AmbientManifold& m, const KernelPair& k) {
  for (const GreensKernel* g : {&k.g1, &k.g2}) {
    switch (g->kind()) {
      case KernelKind::line:
        if (m.kind() != AmbientKind::euclidean || m.dim() != 1)
          throw ConfigInvalid("line kernel needs M = R");
        break;
      case KernelKind::circle:
        if (m.kind() != AmbientKind::torus || m.dim() != 1)
          throw ConfigInvalid("circle kernel needs M = S^1");
        break;
      case KernelKind::gaussian:
        if (m.kind() != AmbientKind::euclidean)
          throw ConfigInvalid("gaussian kernel needs M = R^d");
        break;
    }
  }
}

CotangentState random_ensemble(const EnsembleSampler& opts, CounterRng& rng) {
  const int n = opts.nodes, d = opts.ambient.dim(), m = opts.group.dim();
  if (n < 1) throw ConfigInvalid("ensemble needs at least one node");
  if (d != 1) throw ConfigInvalid("ensemble sampler is one-dimensional");
  const bool circle = opts.ambient.kind() == AmbientKind::torus;
  const double gap = circle ? 2 * kPi / n : opts.spacing;
  CotangentState z{SourceManifold::point_cloud(Eigen::VectorXd::LinSpaced(n, 0.0, n - 1.0),
                                               Eigen::VectorXd::Constant(n, opts.weight)),
                   opts.ambient, opts.group, Field(n, 1), Field(n, 1), GroupField(), Field(n, m)};
  for (int i = 0; i < n; ++i) {
    z.Q(i, 0) = gap * i + opts.jitter * gap / 2 * std::tanh(rng.normal());
    z.P(i, 0) = opts.momentum_min + opts.momentum_scale * std::abs(rng.normal());
    z.sigma.row(i) = (opts.charge_scale * rng.normal_vector(m)).transpose();
    z.gamma.push_back(random_group_element(opts.group, rng));
  }
  return z;
}

double collective_hamiltonian(const CotangentState& z, const KernelPair& k) {
  const int n = z.nodes();
  const Eigen::VectorXd& w = z.source.weights();
  double h = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd x = z.ambient.displacement(node(z.Q, j), node(z.Q, i));
      h += w(i) * w(j) *
           (z.P.row(i).dot(z.P.row(j)) * k.g1.value(x) +
            z.group.tau_star(node(z.sigma, i), node(z.sigma, j)) * k.g2.value(x));
    }
  return 0.5 * h;
}

StateTangent eom_rhs(const CotangentState& z, const KernelPair& k) {
  const int n = z.nodes(), d = z.ambient.dim(), m = z.group.dim();
  const Eigen::VectorXd& w = z.source.weights();
  StateTangent t{Field::Zero(n, d), Field::Zero(n, d), Field::Zero(n, m), Field::Zero(n, m)};
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd si = node(z.sigma, i);
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd x = z.ambient.displacement(node(z.Q, j), node(z.Q, i));
      const Eigen::VectorXd sj = node(z.sigma, j);
      t.dQ.row(i) += w(j) * k.g1.value(x) * z.P.row(j);
      t.eta.row(i) += w(j) * k.g2.value(x) * z.group.sharp(sj).transpose();
      t.dP.row(i) -= w(j) * (z.P.row(i).dot(z.P.row(j)) * k.g1.gradient(x) +
                             z.group.tau_star(si, sj) * k.g2.gradient(x))
                                .transpose();
    }
    t.dsigma.row(i) = -z.group.coad(node(t.eta, i), si).transpose();
  }
  return t;
}

LeftAlgebraElement collective_velocity(const CotangentState& z, const KernelPair& k) {
  const int d = z.ambient.dim(), m = z.group.dim(), n = z.nodes();
  const AmbientManifold amb = z.ambient;
  const Eigen::VectorXd w = z.source.weights();
  const Field q = z.Q, p = z.P;
  Field ssharp(n, m);
  for (int i = 0; i < n; ++i) ssharp.row(i) = z.group.sharp(node(z.sigma, i)).transpose();
  const GreensKernel g1 = k.g1, g2 = k.g2;
  AmbientField u(d, d, [=](const Eigen::VectorXd& y, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
    v = Eigen::VectorXd::Zero(d);
    j = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = amb.displacement(q.row(i).transpose(), y);
      v += w(i) * g1.value(x) * p.row(i).transpose();
      j += w(i) * p.row(i).transpose() * g1.gradient(x).transpose();
    }
  });
  AmbientField nu(d, m, [=](const Eigen::VectorXd& y, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
    v = Eigen::VectorXd::Zero(m);
    j = Eigen::MatrixXd::Zero(m, d);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = amb.displacement(q.row(i).transpose(), y);
      v += w(i) * g2.value(x) * ssharp.row(i).transpose();
      j += w(i) * ssharp.row(i).transpose() * g2.gradient(x).transpose();
    }
  });
  return {u, nu};
}

CotangentState step(const CotangentState& z, double dt, const KernelPair& k,
                    const StepOptions& opts) {
  const int n = z.nodes();
  const auto rotate = [&](const Field& sigma, const Field& xi) {
    Field out(n, sigma.cols());
    for (int i = 0; i < n; ++i)
      out.row(i) = z.group.coAd(z.group.exp(-dt * node(xi, i)), node(sigma, i)).transpose();
    return out;
  };
  StateTangent r = eom_rhs(z, k);
  CotangentState next = z;
  next.Q = z.Q + dt * r.dQ;
  next.P = z.P + dt * r.dP;
  next.sigma = rotate(z.sigma, r.eta);
  CotangentState mid = z;
  bool converged = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    mid.Q = 0.5 * (z.Q + next.Q);
    mid.P = 0.5 * (z.P + next.P);
    mid.sigma = 0.5 * (z.sigma + next.sigma);
    r = eom_rhs(mid, k);
    const Field q = z.Q + dt * r.dQ, p = z.P + dt * r.dP, s = rotate(z.sigma, r.eta);
    const double change = std::max({(q - next.Q).cwiseAbs().maxCoeff(),
                                    (p - next.P).cwiseAbs().maxCoeff(),
                                    (s - next.sigma).cwiseAbs().maxCoeff()});
    const double scale = 1.0 + std::max({q.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff(),
                                         s.cwiseAbs().maxCoeff()});
    next.Q = q;
    next.P = p;
    next.sigma = s;
    if (change <= opts.tol * scale) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergence("implicit midpoint did not converge in " + std::to_string(opts.max_iter) +
                        " iterations");
  for (int i = 0; i < n; ++i) next.gamma[i] = z.group.exp(dt * node(r.eta, i)) * z.gamma[i];
  return next;
}

double EnsembleTrajectory::max_energy_drift() const {
  double worst = 0.0;
  const double h0 = energy.empty() ? 0.0 : energy.front();
  for (double h : energy) worst = std::max(worst, std::abs(h - h0) / std::max(std::abs(h0), 1e-300));
  return worst;
}

double EnsembleTrajectory::max_charge_drift() const {
  double worst = 0.0;
  for (const auto& c : charges) worst = std::max(worst, (c - charges.front()).cwiseAbs().maxCoeff());
  return worst;
}

double EnsembleTrajectory::max_casimir_drift() const {
  double worst = 0.0;
  if (states.empty()) return worst;
  const Eigen::VectorXd s0 = states.front().sigma.rowwise().norm();
  for (const auto& s : states)
    worst = std::max(worst, (s.sigma.rowwise().norm() - s0).cwiseAbs().maxCoeff());
  return worst;
}

EnsembleTrajectory simulate(const CotangentState& z0, const KernelPair& k, double dt,
                            double t_end, int stride,
                            const std::vector<LeftAlgebraElement>& tests,
                            const StepOptions& opts) {
  if (!(dt > 0)) throw ConfigInvalid("simulate: dt must be positive");
  if (stride < 1) throw ConfigInvalid("simulate: stride must be at least 1");
  check_kernels(z0.ambient, k);
  EnsembleTrajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  const auto record = [&](const CotangentState& z, double t) {
    traj.times.push_back(t);
    traj.states.push_back(z);
    traj.energy.push_back(collective_hamiltonian(z, k));
    Field c(z.nodes(), z.group.dim());
    for (int i = 0; i < z.nodes(); ++i)
      c.row(i) = z.group.coAd(z.gamma[i], node(z.sigma, i)).transpose();
    traj.charges.push_back(c);
    Eigen::VectorXd v(static_cast<Eigen::Index>(tests.size()));
    const DiracMomentum mom = jl(z);
    for (std::size_t j = 0; j < tests.size(); ++j) v(j) = jl_eval(mom, tests[j]);
    traj.jl_values.push_back(v);
  };
  const long steps = std::lround(t_end / dt);
  CotangentState z = z0;
  record(z, 0.0);
  for (long s = 1; s <= steps; ++s) {
    z = step(z, dt, k, opts);
    if (s % stride == 0 || s == steps) record(z, s * dt);
  }
  return traj;
}

ReconstructedFields reconstruct_fields(const CotangentState& z, const KernelPair& k,
                                       const Eigen::VectorXd& points) {
  if (z.ambient.dim() != 1) throw Error("reconstruct_fields: M must be one-dimensional");
  const LeftAlgebraElement v = collective_velocity(z, k);
  ReconstructedFields f{Field(points.size(), 1), Field(points.size(), z.group.dim())};
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, points(i));
    f.u.row(i) = v.u.value(x).transpose();
    f.nu.row(i) = v.nu.value(x).transpose();
  }
  return f;
}

EpautRate epaut_rhs(const SourceManifold& grid, const StructureGroup& grp, const Field& m,
                    const Field& n, const Field& u, const Field& nu) {
  if (!grid.is_grid()) throw Error("epaut_rhs: needs a periodic grid");
  const int len = grid.size();
  if (m.rows() != len || n.rows() != len || u.rows() != len || nu.rows() != len ||
      m.cols() != 1 || u.cols() != 1 || n.cols() != grp.dim() || nu.cols() != grp.dim())
    throw Error("epaut_rhs: field shapes do not match the grid");
  const Field um = u.cwiseProduct(m);
  Field un(len, grp.dim());
  for (int a = 0; a < grp.dim(); ++a) un.col(a) = u.col(0).cwiseProduct(n.col(a));
  const Field dnu = derivative(grid, nu);
  EpautRate r{-derivative(grid, um) - m.cwiseProduct(derivative(grid, u)),
              -derivative(grid, un)};
  for (int i = 0; i < len; ++i) {
    r.m_dot(i, 0) -= n.row(i).dot(dnu.row(i));
    r.n_dot.row(i) -= grp.coad(node(nu, i), node(n, i)).transpose();
  }
  return r;
}

double weak_form_rate(const CotangentState& z, const KernelPair& k,
                      const LeftAlgebraElement& test) {
  return -jl_eval(jl(z), bracket(collective_velocity(z, k), test, z.group));
}

double weak_consistency(const EnsembleTrajectory& traj, const KernelPair& k,
                        const std::vector<LeftAlgebraElement>& tests) {
  const std::size_t count = traj.states.size();
  const double h = traj.dt * traj.stride;
  double worst = 0.0;
  for (std::size_t s = 1; s + 1 < count; ++s) {
    // The last snapshot may sit off the uniform stride.
    if (std::abs((traj.times[s + 1] - traj.times[s - 1]) - 2 * h) > 1e-9 * h) continue;
    for (std::size_t j = 0; j < tests.size(); ++j) {
      const double fd = (traj.jl_values[s + 1](j) - traj.jl_values[s - 1](j)) / (2 * h);
      worst = std::max(worst, std::abs(fd - weak_form_rate(traj.states[s], k, tests[j])));
    }
  }
  return worst;
}

}  // namespace epaut
