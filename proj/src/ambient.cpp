#include "epaut/ambient.hpp"

#include <cmath>
#include <numbers>

namespace epaut {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AmbientManifold AmbientManifold::euclidean(int d) {
  if (d < 1) throw Error("AmbientManifold: dimension must be positive");
  AmbientManifold m;
  m.kind_ = AmbientKind::euclidean;
  m.d_ = d;
  return m;
}

AmbientManifold AmbientManifold::torus(int d) {
  AmbientManifold m = euclidean(d);
  m.kind_ = AmbientKind::torus;
  return m;
}

double AmbientManifold::period() const { return kind_ == AmbientKind::torus ? kTwoPi : 0.0; }

Eigen::VectorXd AmbientManifold::displacement(const Eigen::VectorXd& from,
                                              const Eigen::VectorXd& to) const {
  Eigen::VectorXd d = to - from;
  if (kind_ == AmbientKind::torus)
    for (int k = 0; k < d.size(); ++k) d(k) = std::remainder(d(k), kTwoPi);
  return d;
}

Field AmbientManifold::curve_derivative(const SourceManifold& s, const Field& q) const {
  return derivative_wound(s, q, period());
}

Field AmbientManifold::curve_interpolate(const SourceManifold& s, const Field& q,
                                         const Eigen::VectorXd& points) const {
  return interpolate_wound(s, q, period(), points);
}

AmbientField::AmbientField(int dim_in, int dim_out, Evaluator eval)
    : in_(dim_in), out_(dim_out), eval_(std::move(eval)) {}

AmbientField AmbientField::zero(int dim_in, int dim_out) {
  return AmbientField(dim_in, dim_out,
                      [dim_in, dim_out](const Eigen::VectorXd&, Eigen::VectorXd& v,
                                        Eigen::MatrixXd& j) {
                        v = Eigen::VectorXd::Zero(dim_out);
                        j = Eigen::MatrixXd::Zero(dim_out, dim_in);
                      });
}

AmbientField AmbientField::constant(int dim_in, const Eigen::VectorXd& value) {
  const int dim_out = static_cast<int>(value.size());
  return AmbientField(dim_in, dim_out,
                      [=](const Eigen::VectorXd&, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        v = value;
                        j = Eigen::MatrixXd::Zero(dim_out, dim_in);
                      });
}

AmbientField AmbientField::from_value(int dim_in, int dim_out,
                                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f,
                                      double h) {
  return AmbientField(dim_in, dim_out,
                      [=](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        v = f(x);
                        j.resize(dim_out, dim_in);
                        for (int k = 0; k < dim_in; ++k) {
                          Eigen::VectorXd xp = x, xm = x;
                          xp(k) += h;
                          xm(k) -= h;
                          j.col(k) = (f(xp) - f(xm)) / (2 * h);
                        }
                      });
}

void AmbientField::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& value,
                            Eigen::MatrixXd& jac) const {
  eval_(x, value, jac);
}

Eigen::VectorXd AmbientField::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v;
  Eigen::MatrixXd j;
  eval_(x, v, j);
  return v;
}

Eigen::MatrixXd AmbientField::jacobian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v;
  Eigen::MatrixXd j;
  eval_(x, v, j);
  return j;
}

AmbientField AmbientField::operator+(const AmbientField& other) const {
  if (in_ != other.in_ || out_ != other.out_) throw Error("AmbientField: shape mismatch in sum");
  const Evaluator a = eval_, b = other.eval_;
  return AmbientField(in_, out_,
                      [a, b](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        Eigen::VectorXd v2;
                        Eigen::MatrixXd j2;
                        a(x, v, j);
                        b(x, v2, j2);
                        v += v2;
                        j += j2;
                      });
}

AmbientField AmbientField::scaled(double c) const {
  const Evaluator a = eval_;
  return AmbientField(in_, out_,
                      [a, c](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        a(x, v, j);
                        v *= c;
                        j *= c;
                      });
}

AmbientField AmbientField::component(const AmbientField& scalar, int index, int dim_out) {
  const Evaluator a = scalar.eval_;
  const int in = scalar.in_;
  return AmbientField(in, dim_out,
                      [=](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        Eigen::VectorXd s;
                        Eigen::MatrixXd g;
                        a(x, s, g);
                        v = Eigen::VectorXd::Zero(dim_out);
                        j = Eigen::MatrixXd::Zero(dim_out, in);
                        v(index) = s(0);
                        j.row(index) = g.row(0);
                      });
}

AmbientField fourier_mode(const Eigen::VectorXi& k, bool sine) {
  const int d = static_cast<int>(k.size());
  const Eigen::VectorXd kd = k.cast<double>();
  return AmbientField(d, 1,
                      [=](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
                        const double ph = kd.dot(x);
                        const double c = std::cos(ph), s = std::sin(ph);
                        v = Eigen::VectorXd::Constant(1, sine ? s : c);
                        j = (sine ? c : -s) * kd.transpose();
                      });
}

namespace {

// Normalized probabilists' Hermite polynomials He_n / sqrt(n!) and derivatives.
void hermite(int n, double t, double& value, double& deriv) {
  double prev = 0.0, cur = 1.0;  // h_{-1}, h_0
  double dprev = 0.0, dcur = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sk1 = std::sqrt(k + 1.0);
    const double next = (t * cur - std::sqrt(static_cast<double>(k)) * prev) / sk1;
    const double dnext = (cur + t * dcur - std::sqrt(static_cast<double>(k)) * dprev) / sk1;
    prev = cur;
    cur = next;
    dprev = dcur;
    dcur = dnext;
  }
  value = cur;
  deriv = dcur;
}

}  // namespace

AmbientField hermite_mode(const Eigen::VectorXi& n, const Eigen::VectorXd& center, double scale) {
  const int d = static_cast<int>(n.size());
  return AmbientField(d, 1, [=](const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::MatrixXd& j) {
    const Eigen::VectorXd t = (x - center) / scale;
    const double env = std::exp(-0.5 * t.squaredNorm());
    Eigen::VectorXd h(d), dh(d);
    for (int k = 0; k < d; ++k) hermite(n(k), t(k), h(k), dh(k));
    const double prod = h.prod();
    v = Eigen::VectorXd::Constant(1, prod * env);
    j.resize(1, d);
    for (int k = 0; k < d; ++k) {
      double others = 1.0;
      for (int l = 0; l < d; ++l)
        if (l != k) others *= h(l);
      j(0, k) = env * (dh(k) * others - t(k) * prod) / scale;
    }
  });
}

namespace {

void multi_indices(int d, int budget, bool signed_entries, Eigen::VectorXi& cur, int pos,
                   std::vector<Eigen::VectorXi>& out) {
  if (pos == d) {
    out.push_back(cur);
    return;
  }
  for (int v = signed_entries ? -budget : 0; v <= budget; ++v) {
    cur(pos) = v;
    multi_indices(d, budget - std::abs(v), signed_entries, cur, pos + 1, out);
  }
}

bool first_nonzero_positive(const Eigen::VectorXi& k) {
  for (int i = 0; i < k.size(); ++i)
    if (k(i) != 0) return k(i) > 0;
  return false;
}

}  // namespace

std::vector<AmbientField> scalar_basis(const AmbientManifold& m, int k,
                                       const ScalarBasisOptions& opts) {
  const int d = m.dim();
  std::vector<Eigen::VectorXi> idx;
  Eigen::VectorXi cur(d);
  std::vector<AmbientField> out;
  if (m.kind() == AmbientKind::torus) {
    multi_indices(d, k, true, cur, 0, idx);
    out.push_back(AmbientField::constant(d, Eigen::VectorXd::Ones(1)));
    for (const auto& kk : idx) {
      if (!first_nonzero_positive(kk)) continue;
      out.push_back(fourier_mode(kk, false));
      out.push_back(fourier_mode(kk, true));
    }
  } else {
    multi_indices(d, k, false, cur, 0, idx);
    const Eigen::VectorXd center =
        opts.center.size() == d ? opts.center : Eigen::VectorXd::Zero(d);
    for (const auto& kk : idx) out.push_back(hermite_mode(kk, center, opts.scale));
  }
  return out;
}

LeftAlgebraElement zero_left_element(const AmbientManifold& m, const StructureGroup& grp) {
  return {AmbientField::zero(m.dim(), m.dim()), AmbientField::zero(m.dim(), grp.dim())};
}

LeftAlgebraElement scaled(const LeftAlgebraElement& a, double c) {
  return {a.u.scaled(c), a.nu.scaled(c)};
}

LeftAlgebraElement sum(const LeftAlgebraElement& a, const LeftAlgebraElement& b) {
  return {a.u + b.u, a.nu + b.nu};
}

LeftAlgebraElement bracket(const LeftAlgebraElement& a, const LeftAlgebraElement& b,
                           const StructureGroup& grp) {
  const int d = a.u.dim_in();
  auto u_part = [a, b](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd ua, ub;
    Eigen::MatrixXd da, db;
    a.u.evaluate(x, ua, da);
    b.u.evaluate(x, ub, db);
    return da * ub - db * ua;
  };
  auto nu_part = [a, b, grp](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd ua, ub, na, nb;
    Eigen::MatrixXd da, db, dna, dnb;
    a.u.evaluate(x, ua, da);
    b.u.evaluate(x, ub, db);
    a.nu.evaluate(x, na, dna);
    b.nu.evaluate(x, nb, dnb);
    return dna * ub - dnb * ua + grp.ad(na, nb);
  };
  return {AmbientField::from_value(d, d, u_part), AmbientField::from_value(d, grp.dim(), nu_part)};
}

std::vector<LeftAlgebraElement> left_basis(const AmbientManifold& m, const StructureGroup& grp,
                                           int k, const ScalarBasisOptions& opts) {
  const auto scalars = scalar_basis(m, k, opts);
  const int d = m.dim(), dm = grp.dim();
  std::vector<LeftAlgebraElement> out;
  out.reserve(scalars.size() * (d + dm));
  for (const auto& f : scalars) {
    for (int c = 0; c < d; ++c)
      out.push_back({AmbientField::component(f, c, d), AmbientField::zero(d, dm)});
    for (int c = 0; c < dm; ++c)
      out.push_back({AmbientField::zero(d, d), AmbientField::component(f, c, dm)});
  }
  return out;
}

}  // namespace epaut
