#include "epaut/random.hpp"

#include <cmath>
#include <numbers>

namespace epaut {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::next() {
  const std::uint64_t key = splitmix64(seed_ ^ splitmix64(stream_ + 0x632be59bd9b4e019ULL));
  return splitmix64(key + 0x9e3779b97f4a7c15ULL * (counter_++));
}

double CounterRng::uniform() { return (next() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd CounterRng::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(seed_, splitmix64(stream_ * 0x9e3779b97f4a7c15ULL + stream + 1));
}

GroupElement random_group_element(const StructureGroup& grp, CounterRng& rng) {
  if (grp.kind() == GroupKind::circle)
    return GroupElement::from_angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
  // Uniform unit quaternion.
  Eigen::Vector4d q = rng.normal_vector(4);
  q.normalize();
  return GroupElement::from_rotation(
      Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix());
}

AlgebraVector random_algebra(const StructureGroup& grp, CounterRng& rng, double scale) {
  return scale * rng.normal_vector(grp.dim());
}

Field random_band_limited(const SourceManifold& s, int cols, int kmax, double amplitude,
                          CounterRng& rng) {
  Field f = Field::Zero(s.size(), cols);
  for (int c = 0; c < cols; ++c) {
    for (int k = 1; k <= kmax; ++k) {
      const double a = amplitude * rng.normal() / (k * k);
      const double b = amplitude * rng.normal() / (k * k);
      f.col(c) += (a * (k * s.nodes().array()).cos() + b * (k * s.nodes().array()).sin())
                      .matrix();
    }
  }
  return f;
}

CotangentState random_state(const StateSampler& opts, CounterRng& rng) {
  const SourceManifold s = SourceManifold::periodic_grid(opts.nodes);
  const int d = opts.ambient.dim(), m = opts.group.dim(), n = opts.nodes;
  for (int attempt = 0; attempt < 100; ++attempt) {
    CotangentState z{s, opts.ambient, opts.group, Field::Zero(n, d), Field(), GroupField(),
                     Field()};
    if (opts.ambient.kind() == AmbientKind::torus) {
      const Eigen::VectorXd c = rng.normal_vector(d);
      for (int k = 0; k < d; ++k) z.Q.col(k).setConstant(c(k));
      z.Q.col(0) += s.nodes();
      if (opts.curve_wobble > 0)
        z.Q += random_band_limited(s, d, 2, opts.curve_wobble, rng);
    } else {
      if (d < 2) throw Error("random_state: Euclidean sampler needs d >= 2");
      const double r = rng.uniform(opts.radius_min, opts.radius_max);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      if (opts.center.size() == d) z.Q.rowwise() += opts.center.transpose();
      z.Q.col(0).array() += r * (s.nodes().array() + phase).cos();
      z.Q.col(1).array() += r * (s.nodes().array() + phase).sin();
    }
    z.P = random_band_limited(s, d, opts.momentum_modes, opts.momentum_amplitude, rng);
    z.sigma = random_band_limited(s, m, opts.momentum_modes, opts.momentum_amplitude, rng);
    z.P.rowwise() += (opts.momentum_offset * rng.normal_vector(d)).transpose();
    z.sigma.rowwise() += (opts.momentum_offset * rng.normal_vector(m)).transpose();
    const Field xi = random_band_limited(s, m, opts.gauge_modes, opts.gauge_amplitude, rng);
    const GroupElement g0 = random_group_element(opts.group, rng);
    z.gamma = exp_field(opts.group, xi);
    for (auto& g : z.gamma) g = g * g0;
    if (regularity_margin(z) >= opts.min_regularity) return z;
  }
  throw Error("random_state: could not sample a regular state");
}

CotangentState random_point_cloud_state(const StateSampler& opts, CounterRng& rng) {
  const int d = opts.ambient.dim(), m = opts.group.dim(), n = opts.nodes;
  const SourceManifold s = SourceManifold::point_cloud(
      Eigen::VectorXd::LinSpaced(n, 0.0, n - 1.0), Eigen::VectorXd::Ones(n));
  for (int attempt = 0; attempt < 100; ++attempt) {
    CotangentState z{s, opts.ambient, opts.group, Field(n, d), Field(n, d), GroupField(), Field(n, m)};
    for (int i = 0; i < n; ++i) {
      z.Q.row(i) = (opts.radius_max * rng.normal_vector(d)).transpose();
      if (opts.center.size() == d) z.Q.row(i) += opts.center.transpose();
      z.P.row(i) = (opts.momentum_offset * rng.normal_vector(d)).transpose();
      z.sigma.row(i) = (opts.momentum_offset * rng.normal_vector(m)).transpose();
      z.gamma.push_back(random_group_element(opts.group, rng));
    }
    if (regularity_margin(z) >= opts.min_regularity) return z;
  }
  throw Error("random_point_cloud_state: could not sample a regular state");
}

RightTransformer random_right_transformer(const SourceManifold& s, const StructureGroup& grp,
                                          CounterRng& rng, double wobble, double gauge,
                                          bool volume_preserving) {
  const double shift = rng.uniform(-1.0, 1.0);
  GridDiffeo psi = GridDiffeo::shift(s, shift);
  if (!volume_preserving) {
    // psi(x) = x + c + a sin(x + p) + b sin(2x + q) with |a| + 2|b| < 1.
    const double a = wobble * rng.uniform(-1.0, 1.0);
    const double b = 0.5 * wobble * rng.uniform(-1.0, 1.0);
    const double p = rng.uniform(0.0, 6.0), q = rng.uniform(0.0, 6.0);
    psi = GridDiffeo::from_function(
        s, [=](double x) { return x + shift + a * std::sin(x + p) + b * std::sin(2 * x + q); },
        [=](double x) { return 1.0 + a * std::cos(x + p) + 2 * b * std::cos(2 * x + q); });
  }
  const Field xi = random_band_limited(s, grp.dim(), 2, gauge, rng);
  GroupField b = exp_field(grp, xi);
  const GroupElement b0 = random_group_element(grp, rng);
  for (auto& g : b) g = b0 * g;
  return {psi, b};
}

RightAlgebraElement random_right_element(const SourceManifold& s, const StructureGroup& grp,
                                         CounterRng& rng, int modes) {
  RightAlgebraElement e;
  e.v = random_band_limited(s, 1, modes, 0.5, rng).col(0).array() + 0.3 * rng.normal();
  e.zeta = random_band_limited(s, grp.dim(), modes, 0.5, rng);
  e.zeta.rowwise() += (0.3 * rng.normal_vector(grp.dim())).transpose();
  return e;
}

LeftAlgebraElement random_left_element(const AmbientManifold& m, const StructureGroup& grp,
                                       CounterRng& rng, int k, double scale,
                                       const ScalarBasisOptions& opts) {
  const auto basis = left_basis(m, grp, k, opts);
  LeftAlgebraElement out = zero_left_element(m, grp);
  for (const auto& b : basis) out = sum(out, scaled(b, scale * rng.normal()));
  return out;
}

}  // namespace epaut
