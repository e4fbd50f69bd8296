#include "epaut/torus_fluid.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "epaut/errors.hpp"

namespace epaut {

namespace {

using Complex = std::complex<double>;

int wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

// In-place FFT of every line of `data` along `axis`.
void transform(std::vector<Complex>& data, int n, int d, int axis, bool forward) {
  Eigen::FFT<double> fft;
  int stride = 1;
  for (int a = 0; a < axis; ++a) stride *= n;
  const int total = static_cast<int>(data.size());
  std::vector<Complex> line(n), out(n);
  for (int base = 0; base < total; ++base) {
    if ((base / stride) % n != 0) continue;
    for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
    if (forward) fft.fwd(out, line);
    else fft.inv(out, line);
    for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
  }
  (void)d;
}

void transform_all(std::vector<Complex>& data, int n, int d, bool forward) {
  for (int a = 0; a < d; ++a) transform(data, n, d, a, forward);
}

}  // namespace

TorusGrid::TorusGrid(int n, int d) : n_(n), d_(d), size_(1) {
  if (n < 4 || n % 2 != 0) throw ConfigInvalid("TorusGrid: n must be even and at least 4");
  if (d < 1 || d > 3) throw ConfigInvalid("TorusGrid: d must be 1, 2 or 3");
  for (int a = 0; a < d; ++a) size_ *= n;
}

double TorusGrid::cell_volume() const {
  return std::pow(2 * std::numbers::pi / n_, d_);
}

Field TorusGrid::coordinates() const {
  Field x(size_, d_);
  for (int idx = 0; idx < size_; ++idx) {
    int r = idx;
    for (int a = 0; a < d_; ++a) {
      x(idx, a) = 2 * std::numbers::pi * (r % n_) / n_;
      r /= n_;
    }
  }
  return x;
}

Field TorusGrid::derivative(const Field& f, int axis) const {
  if (f.rows() != size_) throw Error("TorusGrid::derivative: field has wrong size");
  int stride = 1;
  for (int a = 0; a < axis; ++a) stride *= n_;
  Field out(f.rows(), f.cols());
  std::vector<Complex> data(size_);
  for (int c = 0; c < f.cols(); ++c) {
    for (int i = 0; i < size_; ++i) data[i] = f(i, c);
    transform(data, n_, d_, axis, true);
    for (int i = 0; i < size_; ++i) {
      const int j = (i / stride) % n_;
      const int k = wavenumber(j, n_);
      data[i] *= (2 * j == n_) ? Complex(0.0) : Complex(0.0, k);
    }
    transform(data, n_, d_, axis, false);
    for (int i = 0; i < size_; ++i) out(i, c) = data[i].real();
  }
  return out;
}

Eigen::VectorXd TorusGrid::divergence(const Field& u) const {
  Eigen::VectorXd div = Eigen::VectorXd::Zero(size_);
  for (int a = 0; a < d_; ++a) div += derivative(u.col(a), a).col(0);
  return div;
}

Field TorusGrid::gradient(const Eigen::VectorXd& f) const {
  Field g(size_, d_);
  for (int a = 0; a < d_; ++a) g.col(a) = derivative(f, a).col(0);
  return g;
}

Eigen::VectorXd TorusGrid::poisson(const Eigen::VectorXd& f) const {
  std::vector<Complex> data(f.data(), f.data() + size_);
  transform_all(data, n_, d_, true);
  for (int idx = 0; idx < size_; ++idx) {
    int r = idx;
    double k2 = 0.0;
    for (int a = 0; a < d_; ++a) {
      // Same symbol as divergence(gradient(.)): Nyquist modes have zero derivative.
      const int j = r % n_;
      const int k = 2 * j == n_ ? 0 : wavenumber(j, n_);
      k2 += static_cast<double>(k) * k;
      r /= n_;
    }
    data[idx] = k2 == 0.0 ? Complex(0.0) : -data[idx] / k2;
  }
  transform_all(data, n_, d_, false);
  Eigen::VectorXd p(size_);
  for (int i = 0; i < size_; ++i) p(i) = data[i].real();
  return p;
}

EpautVolRate epautvol_rhs(const TorusGrid& grid, const StructureGroup& grp, const Field& u,
                          const Field& nu, double div_tol) {
  const int n = grid.size(), d = grid.d(), m = grp.dim();
  if (u.rows() != n || u.cols() != d || nu.rows() != n || nu.cols() != m)
    throw Error("epautvol_rhs: field shapes do not match the grid");
  const double div = grid.divergence(u).cwiseAbs().maxCoeff();
  if (div > div_tol * std::max(1.0, u.cwiseAbs().maxCoeff()))
    throw NotDivergenceFree("max |div u| = " + std::to_string(div));
  const Field mom = u;
  const Field nmom = grp.tau_scale() * nu;
  std::vector<Field> du(d), dmom(d), dnu(d), dn(d);
  for (int a = 0; a < d; ++a) {
    du[a] = grid.derivative(u, a);
    dmom[a] = grid.derivative(mom, a);
    dnu[a] = grid.derivative(nu, a);
    dn[a] = grid.derivative(nmom, a);
  }
  Field rhs = Field::Zero(n, d);
  EpautVolRate out{Field::Zero(n, d), Field::Zero(n, m), Eigen::VectorXd::Zero(n)};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      double v = 0.0;
      for (int a = 0; a < d; ++a) v -= u(i, a) * dmom[a](i, k) + du[k](i, a) * mom(i, a);
      v -= nmom.row(i).dot(dnu[k].row(i));
      rhs(i, k) = v;
    }
    CoalgebraVector adv = CoalgebraVector::Zero(m);
    for (int a = 0; a < d; ++a) adv += u(i, a) * dn[a].row(i).transpose();
    out.dn.row(i) = (-adv - grp.coad(nu.row(i).transpose(), nmom.row(i).transpose())).transpose();
  }
  out.pressure = grid.poisson(grid.divergence(rhs));
  out.dm = rhs - grid.gradient(out.pressure);
  return out;
}

}  // namespace epaut
