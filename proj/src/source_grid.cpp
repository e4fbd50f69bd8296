#include "epaut/source_grid.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace epaut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid(const SourceManifold& s) {
  if (!s.is_grid()) throw PointCloudHasNoDerivative("operation needs a periodic grid source");
}

double wrap_to_period(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

}  // namespace

SourceManifold SourceManifold::periodic_grid(int n) {
  if (n < 2) throw Error("periodic_grid: need at least two nodes");
  SourceManifold s;
  s.kind_ = SourceKind::periodic_grid;
  s.nodes_ = Eigen::VectorXd::LinSpaced(n, 0.0, kTwoPi * (n - 1) / n);
  s.weights_ = Eigen::VectorXd::Constant(n, kTwoPi / n);
  return s;
}

SourceManifold SourceManifold::point_cloud(const Eigen::VectorXd& positions,
                                           const Eigen::VectorXd& weights) {
  if (positions.size() != weights.size() || positions.size() == 0)
    throw Error("point_cloud: positions and weights must have equal nonzero length");
  if ((weights.array() <= 0).any()) throw Error("point_cloud: weights must be positive");
  SourceManifold s;
  s.kind_ = SourceKind::point_cloud;
  s.nodes_ = positions;
  s.weights_ = weights;
  return s;
}

double SourceManifold::spacing() const {
  require_grid(*this);
  return kTwoPi / size();
}

Field derivative(const SourceManifold& s, const Field& f) {
  require_grid(s);
  const int n = s.size();
  if (f.rows() != n) throw Error("derivative: field length does not match source");
  Eigen::FFT<double> fft;
  Field out(n, f.cols());
  std::vector<double> col(n);
  std::vector<std::complex<double>> spec;
  std::vector<double> back;
  for (int c = 0; c < f.cols(); ++c) {
    for (int i = 0; i < n; ++i) col[i] = f(i, c);
    fft.fwd(spec, col);
    for (int k = 0; k < n; ++k) {
      int kk = k <= n / 2 ? k : k - n;
      if (n % 2 == 0 && k == n / 2) kk = 0;
      spec[k] *= std::complex<double>(0.0, kk);
    }
    fft.inv(back, spec);
    for (int i = 0; i < n; ++i) out(i, c) = back[i];
  }
  return out;
}

Eigen::MatrixXd derivative_matrix(const SourceManifold& s) {
  return derivative(s, Eigen::MatrixXd::Identity(s.size(), s.size()));
}

double quadrature(const SourceManifold& s, const Eigen::VectorXd& f) {
  if (f.size() != s.size()) throw Error("quadrature: field length does not match source");
  return s.weights().dot(f);
}

FourierInterpolant::FourierInterpolant(const SourceManifold& s, const Field& f)
    : n_(s.size()), nodes_(s.nodes()), samples_(f) {
  require_grid(s);
  const int kmax = n_ / 2;
  re_ = Eigen::MatrixXd::Zero(kmax + 1, f.cols());
  im_ = Eigen::MatrixXd::Zero(kmax + 1, f.cols());
  Eigen::FFT<double> fft;
  std::vector<double> col(n_);
  std::vector<std::complex<double>> spec;
  for (int c = 0; c < f.cols(); ++c) {
    for (int i = 0; i < n_; ++i) col[i] = f(i, c);
    fft.fwd(spec, col);
    for (int k = 0; k <= kmax; ++k) {
      const bool single = k == 0 || (n_ % 2 == 0 && k == kmax);
      const double scale = (single ? 1.0 : 2.0) / n_;
      re_(k, c) = scale * spec[k].real();
      im_(k, c) = single ? 0.0 : -scale * spec[k].imag();
    }
  }
}

Eigen::VectorXd FourierInterpolant::value(double x) const {
  const double h = kTwoPi / n_;
  const double xw = wrap_to_period(x);
  const long idx = std::lround(xw / h);
  if (std::abs(xw - idx * h) < 1e-14) return samples_.row(idx % n_).transpose();
  return derivative(x, 0);
}

Eigen::VectorXd FourierInterpolant::derivative(double x, int order) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(re_.cols());
  for (int k = 0; k < re_.rows(); ++k) {
    const double phase = k * x + order * std::numbers::pi / 2;
    const double scale = std::pow(static_cast<double>(k), order);
    if (order > 0 && k == 0) continue;
    out += scale * (std::cos(phase) * re_.row(k).transpose() +
                    std::sin(phase) * im_.row(k).transpose());
  }
  return out;
}

GridDiffeo::GridDiffeo(Eigen::VectorXd lift, Eigen::VectorXd jac)
    : lift_(std::move(lift)), jac_(std::move(jac)) {
  validate();
}

void GridDiffeo::validate() const {
  const int n = static_cast<int>(lift_.size());
  if ((jac_.array() <= 0).any()) throw NonMonotone("Jacobian is not positive");
  for (int i = 0; i + 1 < n; ++i)
    if (!(lift_(i + 1) > lift_(i))) throw NonMonotone("lift is not strictly increasing");
  if (!(lift_(0) + kTwoPi > lift_(n - 1))) throw NonMonotone("lift does not close with degree 1");
}

GridDiffeo GridDiffeo::identity(const SourceManifold& s) {
  require_grid(s);
  return GridDiffeo(s.nodes(), Eigen::VectorXd::Ones(s.size()));
}

GridDiffeo GridDiffeo::shift(const SourceManifold& s, double offset) {
  require_grid(s);
  return GridDiffeo(s.nodes().array() + offset, Eigen::VectorXd::Ones(s.size()));
}

GridDiffeo GridDiffeo::from_function(const SourceManifold& s,
                                     const std::function<double(double)>& psi,
                                     const std::function<double(double)>& dpsi) {
  require_grid(s);
  Eigen::VectorXd lift(s.size()), jac(s.size());
  for (int i = 0; i < s.size(); ++i) {
    lift(i) = psi(s.nodes()(i));
    jac(i) = dpsi(s.nodes()(i));
  }
  return GridDiffeo(lift, jac);
}

GridDiffeo GridDiffeo::from_lift(const SourceManifold& s, const Eigen::VectorXd& lift) {
  require_grid(s);
  const Eigen::VectorXd periodic = lift - s.nodes();
  const Eigen::VectorXd jac = (derivative(s, periodic).col(0).array() + 1.0).matrix();
  return GridDiffeo(lift, jac);
}

Field interpolate(const SourceManifold& s, const Field& f, const Eigen::VectorXd& points) {
  const FourierInterpolant fi(s, f);
  Field out(points.size(), f.cols());
  for (int i = 0; i < points.size(); ++i) out.row(i) = fi.value(points(i)).transpose();
  return out;
}

Field resample(const SourceManifold& s, const Field& f, const GridDiffeo& psi) {
  return interpolate(s, f, psi.lift());
}

namespace {

AlgebraVector chart_log(const StructureGroup& grp, const GroupElement& g) {
  AlgebraVector v = grp.log(g);
  if (grp.kind() == GroupKind::circle) v(0) = std::remainder(v(0), kTwoPi);
  return v;
}

}  // namespace

GroupElement interpolate_group(const SourceManifold& s, const StructureGroup& grp,
                               const GroupField& g, double x) {
  require_grid(s);
  const int n = s.size();
  const double h = kTwoPi / n;
  const double xw = wrap_to_period(x);
  const long nearest = std::lround(xw / h);
  if (std::abs(xw - nearest * h) < 1e-14) return g[nearest % n];
  const long i0 = static_cast<long>(std::floor(xw / h));
  const GroupElement ref_inv = g[i0 % n].inverse();
  const int half = std::min(8, n / 2);
  const long lo = i0 - half + 1, hi = i0 + half;
  // Lagrange interpolation of chart coordinates on the window [lo, hi].
  const double t = xw / h;
  AlgebraVector acc = grp.zero();
  for (long j = lo; j <= hi; ++j) {
    double w = 1.0;
    for (long k = lo; k <= hi; ++k)
      if (k != j) w *= (t - k) / static_cast<double>(j - k);
    const GroupElement gj = g[((j % n) + n) % n];
    acc += w * chart_log(grp, ref_inv * gj);
  }
  return g[i0 % n] * grp.exp(acc);
}

GroupField resample(const SourceManifold& s, const StructureGroup& grp, const GroupField& g,
                    const GridDiffeo& psi) {
  GroupField out;
  out.reserve(psi.lift().size());
  for (int i = 0; i < psi.lift().size(); ++i)
    out.push_back(interpolate_group(s, grp, g, psi.lift()(i)));
  return out;
}

LiftedField unwrap(const SourceManifold& s, const Field& f, double period) {
  const int n = s.size();
  LiftedField out{Field(n, f.cols()), Eigen::VectorXi::Zero(f.cols())};
  for (int c = 0; c < f.cols(); ++c) {
    out.lift(0, c) = f(0, c);
    for (int i = 1; i < n; ++i)
      out.lift(i, c) = out.lift(i - 1, c) + std::remainder(f(i, c) - f(i - 1, c), period);
    const double closing = out.lift(n - 1, c) + std::remainder(f(0, c) - f(n - 1, c), period);
    out.winding(c) = static_cast<int>(std::lround((closing - out.lift(0, c)) / period));
  }
  return out;
}

Field derivative_wound(const SourceManifold& s, const Field& f, double period) {
  if (period <= 0) return derivative(s, f);
  LiftedField lf = unwrap(s, f, period);
  for (int c = 0; c < f.cols(); ++c)
    lf.lift.col(c) -= lf.winding(c) * period / kTwoPi * s.nodes();
  Field d = derivative(s, lf.lift);
  for (int c = 0; c < f.cols(); ++c) d.col(c).array() += lf.winding(c) * period / kTwoPi;
  return d;
}

Field interpolate_wound(const SourceManifold& s, const Field& f, double period,
                        const Eigen::VectorXd& points) {
  if (period <= 0) return interpolate(s, f, points);
  LiftedField lf = unwrap(s, f, period);
  for (int c = 0; c < f.cols(); ++c)
    lf.lift.col(c) -= lf.winding(c) * period / kTwoPi * s.nodes();
  Field out = interpolate(s, lf.lift, points);
  for (int c = 0; c < f.cols(); ++c)
    out.col(c) += lf.winding(c) * period / kTwoPi * points;
  return out;
}

namespace {

Field logderiv(const SourceManifold& s, const StructureGroup& grp, const GroupField& g,
               bool right) {
  require_grid(s);
  const int n = s.size();
  if (static_cast<int>(g.size()) != n) throw Error("logderiv: field length does not match source");
  if (grp.kind() == GroupKind::circle) {
    Field angles(n, 1);
    for (int i = 0; i < n; ++i) angles(i, 0) = g[i].angle();
    return derivative_wound(s, angles, kTwoPi);
  }
  Field entries(n, 9);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) entries(i, 3 * a + b) = g[i].rotation()(a, b);
  const Field d = derivative(s, entries);
  Field out(n, 3);
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix3d dg;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dg(a, b) = d(i, 3 * a + b);
    const Eigen::Matrix3d& r = g[i].rotation();
    out.row(i) = vee(right ? Eigen::Matrix3d(dg * r.transpose())
                           : Eigen::Matrix3d(r.transpose() * dg))
                     .transpose();
  }
  return out;
}

}  // namespace

Field logderiv_right(const SourceManifold& s, const StructureGroup& grp, const GroupField& g) {
  return logderiv(s, grp, g, true);
}

Field logderiv_left(const SourceManifold& s, const StructureGroup& grp, const GroupField& g) {
  return logderiv(s, grp, g, false);
}

Field d_logderiv(const SourceManifold& s, const StructureGroup& grp, const GroupField& g,
                 const Field& j) {
  const Field r = logderiv_right(s, grp, g);
  Field out = derivative(s, j);
  for (int i = 0; i < s.size(); ++i)
    out.row(i) += grp.ad(j.row(i).transpose(), r.row(i).transpose()).transpose();
  return out;
}

GroupField constant_group_field(const StructureGroup&, int n, const GroupElement& g) {
  return GroupField(n, g);
}

GroupField exp_field(const StructureGroup& grp, const Field& xi) {
  GroupField out;
  out.reserve(xi.rows());
  for (int i = 0; i < xi.rows(); ++i) out.push_back(grp.exp(xi.row(i).transpose()));
  return out;
}

GroupField multiply(const GroupField& a, const GroupField& b) {
  if (a.size() != b.size()) throw Error("multiply: group field lengths differ");
  GroupField out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

GroupField inverse(const GroupField& a) {
  GroupField out;
  out.reserve(a.size());
  for (const auto& g : a) out.push_back(g.inverse());
  return out;
}

double max_distance(const GroupField& a, const GroupField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i].distance(b[i]));
  return m;
}

}  // namespace epaut
