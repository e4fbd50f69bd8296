#pragma once

#include <functional>
#include <vector>

#include "epaut/observables.hpp"
#include "epaut/yang_mills.hpp"

namespace epaut {

// Time-t map of the trivialized Hamiltonian field of h (dopri5 dense output).
class HamiltonianFlow {
 public:
  HamiltonianFlow(Observable h, StructureGroup grp, double time = 1.0, double tol = 1e-12);

  const Observable& observable() const { return h_; }
  const StructureGroup& group() const { return grp_; }
  double time() const { return time_; }
  PhasePoint apply(const PhasePoint& x) const;
  // Integrates all points as one system, so they share one step sequence.
  std::vector<PhasePoint> apply(const std::vector<PhasePoint>& xs) const;
  // Nodewise action on a state.
  VolState apply(const VolState& z) const;
  HamiltonianFlow inverse() const { return HamiltonianFlow(h_, grp_, -time_, tol_); }
  // Calls observe(t, z(t)) at t = 0, dt, 2 dt, ... up to time().
  void sample(const VolState& z, double dt,
              const std::function<void(double, const VolState&)>& observe) const;

 private:
  Observable h_;
  StructureGroup grp_;
  double time_;
  double tol_;
};

// Composition of flows; factors()[0] is applied last.
class SymplecticMap {
 public:
  explicit SymplecticMap(StructureGroup grp) : grp_(std::move(grp)) {}
  SymplecticMap(const HamiltonianFlow& f);  // NOLINT(google-explicit-constructor)

  static SymplecticMap identity(const StructureGroup& grp) { return SymplecticMap(grp); }
  bool is_identity() const { return factors_.empty(); }
  const StructureGroup& group() const { return grp_; }
  const std::vector<HamiltonianFlow>& factors() const { return factors_; }
  PhasePoint apply(const PhasePoint& x) const;
  std::vector<PhasePoint> apply(const std::vector<PhasePoint>& xs) const;
  // Tangent map by central differences with step h; exact for the identity. The
  // two displaced points are integrated together so that adaptive step changes
  // do not enter the difference quotient.
  PhaseTangent push(const PhasePoint& x, const PhaseTangent& v, double h = 1e-6) const;
  // f(x) and push(x, v) from one integration.
  std::pair<PhasePoint, PhaseTangent> apply_and_push(const PhasePoint& x, const PhaseTangent& v,
                                                     double h = 1e-6) const;

 private:
  StructureGroup grp_;
  std::vector<HamiltonianFlow> factors_;
  friend SymplecticMap compose(const SymplecticMap& a, const SymplecticMap& b);
};

// a o b
SymplecticMap compose(const SymplecticMap& a, const SymplecticMap& b);

// max over `pairs` random tangent pairs of |omega(push a, push b) - omega(a, b)| / (|a| |b|).
double symplecticity_defect(const SymplecticMap& f, const PhasePoint& x, std::uint64_t seed,
                            int pairs = 4);

struct CocycleOptions {
  double fd_step = 1e-6;
  // Relative to the L1 norm of the integrand. The difference quotient carries
  // round-off of order 1e-9, so much smaller values cannot be met.
  double tol = 1e-9;
  int max_depth = 4;
  double accept = 1e-7;  // largest error estimate, relative to max(1, L1), not thrown on
};

// Integral of (theta - f^* theta) along the chart segment from a to b: straight in
// (q, p, sigma), g(s) = exp(s log(g_b g_a^{-1})) g_a. Throws QuadratureNotConverged.
double path_integral(const SymplecticMap& f, const PhasePoint& a, const PhasePoint& b,
                     const CocycleOptions& opts = {});
// B(f1, f2) at base point p0: path_integral(f1, p0, f2(p0)).
double cocycle_B(const SymplecticMap& f1, const SymplecticMap& f2, const PhasePoint& p0,
                 const CocycleOptions& opts = {});
// b(f) = path_integral(f, p0, p1); B at p1 minus B at p0 equals b(f1 f2) - b(f1) - b(f2).
double coboundary_term(const SymplecticMap& f, const PhasePoint& p0, const PhasePoint& p1,
                       const CocycleOptions& opts = {});

}  // namespace epaut
