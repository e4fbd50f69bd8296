#include "epaut/hamiltonian_flow.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "epaut/errors.hpp"
#include "epaut/random.hpp"

namespace epaut {

namespace {

using OdeState = std::vector<double>;

int group_coords(const StructureGroup& grp) { return grp.kind() == GroupKind::circle ? 1 : 9; }

struct PackLayout {
  int d, m, ng;
  int stride() const { return 2 * d + m + ng; }
};

void pack(const PackLayout& lay, const PhasePoint& x, double* y) {
  for (int k = 0; k < lay.d; ++k) y[k] = x.q(k), y[lay.d + k] = x.p(k);
  for (int a = 0; a < lay.m; ++a) y[2 * lay.d + a] = x.sigma(a);
  double* g = y + 2 * lay.d + lay.m;
  if (lay.ng == 1) {
    g[0] = x.g.angle();
  } else {
    Eigen::Map<Eigen::Matrix3d> gm(g);
    gm = x.g.rotation();
  }
}

PhasePoint unpack(const PackLayout& lay, const double* y) {
  PhasePoint x;
  x.q = Eigen::Map<const Eigen::VectorXd>(y, lay.d);
  x.p = Eigen::Map<const Eigen::VectorXd>(y + lay.d, lay.d);
  x.sigma = Eigen::Map<const Eigen::VectorXd>(y + 2 * lay.d, lay.m);
  const double* g = y + 2 * lay.d + lay.m;
  if (lay.ng == 1) {
    x.g = GroupElement::from_angle(g[0]);
  } else {
    x.g = GroupElement::from_rotation(nearest_rotation(Eigen::Map<const Eigen::Matrix3d>(g)));
  }
  return x;
}

// Right side of the trivialized field of `scale` * h for `count` stacked points.
struct FlowRhs {
  const Observable* h;
  const StructureGroup* grp;
  PackLayout lay;
  int count;
  double scale;

  void operator()(const OdeState& y, OdeState& dy, double) const {
    const int st = lay.stride();
    for (int i = 0; i < count; ++i) {
      const double* yi = y.data() + i * st;
      double* di = dy.data() + i * st;
      const Eigen::Map<const Eigen::VectorXd> q(yi, lay.d), p(yi + lay.d, lay.d),
          s(yi + 2 * lay.d, lay.m);
      const ObservableValue v = h->evaluate(q, p, s);
      const CoalgebraVector ds = -grp->coad(v.dsigma, s);
      for (int k = 0; k < lay.d; ++k) {
        di[k] = scale * v.dp(k);
        di[lay.d + k] = -scale * v.dq(k);
      }
      for (int a = 0; a < lay.m; ++a) di[2 * lay.d + a] = scale * ds(a);
      if (lay.ng == 1) {
        di[2 * lay.d + lay.m] = scale * v.dsigma(0);
      } else {
        const Eigen::Map<const Eigen::Matrix3d> g(yi + 2 * lay.d + lay.m);
        Eigen::Map<Eigen::Matrix3d> dg(di + 2 * lay.d + lay.m);
        dg = scale * hat(Eigen::Vector3d(v.dsigma(0), v.dsigma(1), v.dsigma(2))) * g;
      }
    }
  }
};

OdeState pack_state(const PackLayout& lay, const VolState& z) {
  OdeState y(static_cast<std::size_t>(lay.stride() * z.nodes()));
  for (int i = 0; i < z.nodes(); ++i) pack(lay, node_point(z, i), y.data() + i * lay.stride());
  return y;
}

VolState unpack_state(const PackLayout& lay, const VolState& z0, const OdeState& y) {
  VolState z = z0;
  for (int i = 0; i < z.nodes(); ++i) {
    const PhasePoint x = unpack(lay, y.data() + i * lay.stride());
    z.Q.row(i) = x.q.transpose();
    z.P.row(i) = x.p.transpose();
    z.sigma.row(i) = x.sigma.transpose();
    z.gamma[i] = x.g;
  }
  return z;
}

void check_finite(const OdeState& y) {
  for (double v : y)
    if (!std::isfinite(v)) throw NoConvergence("Hamiltonian flow left the finite range");
}

}  // namespace

HamiltonianFlow::HamiltonianFlow(Observable h, StructureGroup grp, double time, double tol)
    : h_(std::move(h)), grp_(std::move(grp)), time_(time), tol_(tol) {
  if (h_.m() != grp_.dim()) throw Error("HamiltonianFlow: observable and group dimensions differ");
  if (!(tol_ > 0)) throw ConfigInvalid("HamiltonianFlow: tolerance must be positive");
}

PhasePoint HamiltonianFlow::apply(const PhasePoint& x) const {
  return apply(std::vector<PhasePoint>{x}).front();
}

std::vector<PhasePoint> HamiltonianFlow::apply(const std::vector<PhasePoint>& xs) const {
  namespace ode = boost::numeric::odeint;
  const PackLayout lay{h_.d(), h_.m(), group_coords(grp_)};
  const int count = static_cast<int>(xs.size());
  OdeState y(static_cast<std::size_t>(lay.stride() * count));
  for (int i = 0; i < count; ++i) pack(lay, xs[i], y.data() + i * lay.stride());
  if (time_ == 0.0) return xs;
  const FlowRhs rhs{&h_, &grp_, lay, count, time_};
  auto stepper = ode::make_dense_output(tol_, tol_, ode::runge_kutta_dopri5<OdeState>());
  ode::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 0.05);
  check_finite(y);
  std::vector<PhasePoint> out;
  for (int i = 0; i < count; ++i) out.push_back(unpack(lay, y.data() + i * lay.stride()));
  return out;
}

VolState HamiltonianFlow::apply(const VolState& z) const {
  namespace ode = boost::numeric::odeint;
  const PackLayout lay{h_.d(), h_.m(), group_coords(grp_)};
  OdeState y = pack_state(lay, z);
  if (time_ == 0.0) return z;
  const FlowRhs rhs{&h_, &grp_, lay, z.nodes(), time_};
  auto stepper = ode::make_dense_output(tol_, tol_, ode::runge_kutta_dopri5<OdeState>());
  ode::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 0.05);
  check_finite(y);
  return unpack_state(lay, z, y);
}

void HamiltonianFlow::sample(const VolState& z, double dt,
                             const std::function<void(double, const VolState&)>& observe) const {
  namespace ode = boost::numeric::odeint;
  if (!(dt > 0)) throw ConfigInvalid("HamiltonianFlow::sample: dt must be positive");
  const PackLayout lay{h_.d(), h_.m(), group_coords(grp_)};
  OdeState y = pack_state(lay, z);
  const FlowRhs rhs{&h_, &grp_, lay, z.nodes(), 1.0};
  auto stepper = ode::make_dense_output(tol_, tol_, ode::runge_kutta_dopri5<OdeState>());
  const auto steps = static_cast<std::size_t>(std::llround(std::abs(time_) / dt));
  const double step = time_ >= 0 ? dt : -dt;
  ode::integrate_n_steps(stepper, rhs, y, 0.0, step, steps,
                         [&](const OdeState& s, double t) { observe(t, unpack_state(lay, z, s)); });
}

SymplecticMap::SymplecticMap(const HamiltonianFlow& f) : grp_(f.group()), factors_{f} {}

PhasePoint SymplecticMap::apply(const PhasePoint& x) const {
  return apply(std::vector<PhasePoint>{x}).front();
}

std::vector<PhasePoint> SymplecticMap::apply(const std::vector<PhasePoint>& xs) const {
  std::vector<PhasePoint> ys = xs;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) ys = it->apply(ys);
  return ys;
}

PhaseTangent SymplecticMap::push(const PhasePoint& x, const PhaseTangent& v, double h) const {
  return apply_and_push(x, v, h).second;
}

std::pair<PhasePoint, PhaseTangent> SymplecticMap::apply_and_push(const PhasePoint& x,
                                                                  const PhaseTangent& v,
                                                                  double h) const {
  if (is_identity()) return {x, v};
  const auto ys = apply({x, perturb(grp_, x, v, h), perturb(grp_, x, v, -h)});
  return {ys[0], central_difference(grp_, ys[1], ys[2], h)};
}

SymplecticMap compose(const SymplecticMap& a, const SymplecticMap& b) {
  SymplecticMap out(a.grp_);
  out.factors_ = a.factors_;
  out.factors_.insert(out.factors_.end(), b.factors_.begin(), b.factors_.end());
  return out;
}

double symplecticity_defect(const SymplecticMap& f, const PhasePoint& x, std::uint64_t seed,
                            int pairs) {
  CounterRng rng(seed, 0x5359);
  const StructureGroup& grp = f.group();
  const int d = static_cast<int>(x.q.size()), m = grp.dim();
  auto random_tangent = [&] {
    return PhaseTangent{rng.normal_vector(d), rng.normal_vector(d), rng.normal_vector(m),
                        rng.normal_vector(m)};
  };
  auto norm = [](const PhaseTangent& v) {
    return std::sqrt(v.dq.squaredNorm() + v.dp.squaredNorm() + v.eta.squaredNorm() +
                     v.dsigma.squaredNorm());
  };
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const PhaseTangent a = random_tangent(), b = random_tangent();
    const auto [y, pa] = f.apply_and_push(x, a);
    const double before = omega_point(grp, x, a, b);
    const double after = omega_point(grp, y, pa, f.push(x, b));
    worst = std::max(worst, std::abs(after - before) / (norm(a) * norm(b)));
  }
  return worst;
}

double path_integral(const SymplecticMap& f, const PhasePoint& a, const PhasePoint& b,
                     const CocycleOptions& opts) {
  if (f.is_identity()) return 0.0;
  const StructureGroup& grp = f.group();
  const PhaseTangent v{b.q - a.q, b.p - a.p, grp.log(b.g * a.g.inverse()), b.sigma - a.sigma};
  auto integrand = [&](double s) {
    const PhasePoint x = perturb(grp, a, v, s);
    const auto [y, w] = f.apply_and_push(x, v, opts.fd_step);
    return theta_point(x, v) - theta_point(y, w);
  };
  double error = 0.0, l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, 1.0, static_cast<unsigned>(opts.max_depth), opts.tol, &error, &l1);
  if (!(error <= opts.accept * std::max(1.0, l1)))
    throw QuadratureNotConverged("error estimate " + std::to_string(error) + " above " +
                                 std::to_string(opts.accept));
  return value;
}

double cocycle_B(const SymplecticMap& f1, const SymplecticMap& f2, const PhasePoint& p0,
                 const CocycleOptions& opts) {
  return path_integral(f1, p0, f2.apply(p0), opts);
}

double coboundary_term(const SymplecticMap& f, const PhasePoint& p0, const PhasePoint& p1,
                       const CocycleOptions& opts) {
  return path_integral(f, p0, p1, opts);
}

}  // namespace epaut
