#include "epaut/observables.hpp"

#include <cmath>
#include <sstream>

#include "epaut/errors.hpp"
#include "epaut/random.hpp"

namespace epaut {

namespace {

std::vector<Eigen::VectorXi> half_plane_modes(int d, int k_max) {
  // Nonzero integer vectors with |k|_1 <= k_max whose first nonzero entry is positive.
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(d, -k_max);
  while (true) {
    if (k.cwiseAbs().sum() <= k_max && k.cwiseAbs().sum() > 0) {
      int first = 0;
      while (k(first) == 0) ++first;
      if (k(first) > 0) out.push_back(k);
    }
    int i = 0;
    while (i < d && k(i) == k_max) k(i++) = -k_max;
    if (i == d) break;
    ++k(i);
  }
  return out;
}

std::vector<Eigen::VectorXi> monomial_powers(int d, int degree) {
  std::vector<Eigen::VectorXi> out;
  Eigen::VectorXi a = Eigen::VectorXi::Zero(d);
  while (true) {
    if (a.sum() <= degree) out.push_back(a);
    int i = 0;
    while (i < d && a(i) == degree) a(i++) = 0;
    if (i == d) break;
    ++a(i);
  }
  return out;
}

}  // namespace

Observable::Observable(int d, int m, Evaluator eval, std::string name, bool validate)
    : d_(d), m_(m), eval_(std::move(eval)), name_(std::move(name)) {
  if (!validate) return;
  CounterRng rng(0x0b5e);
  for (int probe = 0; probe < 3; ++probe) {
    const Eigen::VectorXd q = rng.normal_vector(d), p = rng.normal_vector(d),
                          s = rng.normal_vector(m);
    const double err = partials_error(q, p, s);
    if (err > 1e-6)
      throw Error("Observable " + name_ + ": partials disagree with finite differences (" +
                  std::to_string(err) + ")");
  }
}

double Observable::partials_error(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                                  const Eigen::VectorXd& sigma, double h) const {
  const ObservableValue v = evaluate(q, p, sigma);
  Eigen::VectorXd an(2 * d_ + m_), fd(2 * d_ + m_);
  an << v.dq, v.dp, v.dsigma;
  for (int c = 0; c < an.size(); ++c) {
    Eigen::VectorXd x(2 * d_ + m_);
    x << q, p, sigma;
    Eigen::VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    fd(c) = (value(xp.head(d_), xp.segment(d_, d_), xp.tail(m_)) -
             value(xm.head(d_), xm.segment(d_, d_), xm.tail(m_))) /
            (2 * h);
  }
  return (an - fd).norm() / std::max(1.0, an.norm());
}

Observable Observable::constant(int d, int m, double c) {
  return Observable(
      d, m,
      [=](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return ObservableValue{c, Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d),
                               Eigen::VectorXd::Zero(m)};
      },
      "const", false);
}

Observable Observable::monomial(const Eigen::VectorXi& k, bool sine, const Eigen::VectorXi& powers,
                                const std::vector<int>& sigma_factors, int m) {
  const int d = static_cast<int>(k.size());
  if (powers.size() != d) throw Error("Observable::monomial: power vector has wrong length");
  if (sigma_factors.size() > 2) throw Error("Observable::monomial: at most two sigma factors");
  for (int a : sigma_factors)
    if (a < 0 || a >= m) throw Error("Observable::monomial: sigma index out of range");
  std::ostringstream name;
  name << (sine ? "sin" : "cos") << "(" << k.transpose() << ")*p^(" << powers.transpose() << ")";
  for (int a : sigma_factors) name << "*s" << a;
  const Eigen::VectorXd kd = k.cast<double>();
  auto eval = [=](const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::VectorXd& s) {
    const double phase = kd.dot(q);
    const double f = sine ? std::sin(phase) : std::cos(phase);
    const double df = sine ? std::cos(phase) : -std::sin(phase);
    double poly = 1.0;
    Eigen::VectorXd dpoly = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) poly *= std::pow(p(i), powers(i));
    for (int i = 0; i < d; ++i) {
      if (powers(i) == 0) continue;
      double t = powers(i) * std::pow(p(i), powers(i) - 1);
      for (int j = 0; j < d; ++j)
        if (j != i) t *= std::pow(p(j), powers(j));
      dpoly(i) = t;
    }
    double sig = 1.0;
    Eigen::VectorXd dsig = Eigen::VectorXd::Zero(m);
    if (sigma_factors.size() == 1) {
      sig = s(sigma_factors[0]);
      dsig(sigma_factors[0]) = 1.0;
    } else if (sigma_factors.size() == 2) {
      const int a = sigma_factors[0], b = sigma_factors[1];
      sig = s(a) * s(b);
      dsig(a) += s(b);
      dsig(b) += s(a);
    }
    return ObservableValue{f * poly * sig, df * poly * sig * kd, f * sig * dpoly, f * poly * dsig};
  };
  return Observable(d, m, eval, name.str(), false);
}

Observable Observable::linear_sigma(int d, const Eigen::VectorXd& xi) {
  const int m = static_cast<int>(xi.size());
  return Observable(
      d, m,
      [=](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd& s) {
        return ObservableValue{s.dot(xi), Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d), xi};
      },
      "<sigma,xi>", false);
}

Observable Observable::from_value(
    int d, int m,
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::VectorXd&)> f,
    std::string name, double h) {
  auto eval = [=](const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::VectorXd& s) {
    ObservableValue v{f(q, p, s), Eigen::VectorXd(d), Eigen::VectorXd(d), Eigen::VectorXd(m)};
    Eigen::VectorXd x(2 * d + m);
    x << q, p, s;
    for (int c = 0; c < x.size(); ++c) {
      Eigen::VectorXd xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      const double g = (f(xp.head(d), xp.segment(d, d), xp.tail(m)) -
                        f(xm.head(d), xm.segment(d, d), xm.tail(m))) /
                       (2 * h);
      if (c < d) v.dq(c) = g;
      else if (c < 2 * d) v.dp(c - d) = g;
      else v.dsigma(c - 2 * d) = g;
    }
    return v;
  };
  return Observable(d, m, eval, std::move(name), false);
}

Observable Observable::operator+(const Observable& other) const {
  if (other.d_ != d_ || other.m_ != m_) throw Error("Observable: dimension mismatch in sum");
  const Evaluator a = eval_, b = other.eval_;
  return Observable(
      d_, m_,
      [a, b](const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::VectorXd& s) {
        ObservableValue x = a(q, p, s);
        const ObservableValue y = b(q, p, s);
        x.value += y.value;
        x.dq += y.dq;
        x.dp += y.dp;
        x.dsigma += y.dsigma;
        return x;
      },
      name_ + "+" + other.name_, false);
}

Observable Observable::scaled(double c) const {
  const Evaluator a = eval_;
  std::ostringstream name;
  name << c << "*(" << name_ << ")";
  return Observable(
      d_, m_,
      [a, c](const Eigen::VectorXd& q, const Eigen::VectorXd& p, const Eigen::VectorXd& s) {
        ObservableValue x = a(q, p, s);
        x.value *= c;
        x.dq *= c;
        x.dp *= c;
        x.dsigma *= c;
        return x;
      },
      name.str(), false);
}

std::vector<Observable> observable_basis(int d, int m, int k_max, int p_degree,
                                         bool quadratic_sigma) {
  std::vector<std::vector<int>> sigma_sets = {{}};
  for (int a = 0; a < m; ++a) sigma_sets.push_back({a});
  if (quadratic_sigma)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) sigma_sets.push_back({a, b});
  std::vector<std::pair<Eigen::VectorXi, bool>> waves = {{Eigen::VectorXi::Zero(d), false}};
  for (const auto& k : half_plane_modes(d, k_max)) {
    waves.push_back({k, false});
    waves.push_back({k, true});
  }
  std::vector<Observable> out;
  for (const auto& [k, sine] : waves)
    for (const auto& a : monomial_powers(d, p_degree))
      for (const auto& s : sigma_sets) out.push_back(Observable::monomial(k, sine, a, s, m));
  return out;
}

Observable random_observable(int d, int m, std::uint64_t seed, double scale, int k_max,
                             int terms, int p_degree) {
  CounterRng rng(seed, 0x0b5);
  const auto basis = observable_basis(d, m, k_max, p_degree, true);
  Observable h = Observable::constant(d, m, 0.0);
  for (int t = 0; t < terms; ++t) {
    const auto idx = static_cast<std::size_t>(rng.uniform() * basis.size()) % basis.size();
    h = h + basis[idx].scaled(scale * rng.normal());
  }
  return h;
}

}  // namespace epaut
