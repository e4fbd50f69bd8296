#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epaut/momentum_maps.hpp"
#include "epaut/phase_space.hpp"
#include "epaut/random.hpp"

namespace epaut {

enum class KernelKind { line, circle, gaussian };

// Even scalar kernel evaluated on displacements. line: exp(-|x|/a) / (2a) on R;
// circle: cosh((|x| - pi)/a) / (2a sinh(pi/a)) on the circle of length 2 pi;
// gaussian: exp(-|x|^2 / (2a^2)) on R^d. The peaked kernels use G'(0) = 0.
class GreensKernel {
 public:
  GreensKernel(KernelKind kind, double alpha);
  static GreensKernel line(double alpha) { return {KernelKind::line, alpha}; }
  static GreensKernel circle(double alpha) { return {KernelKind::circle, alpha}; }
  static GreensKernel gaussian(double alpha) { return {KernelKind::gaussian, alpha}; }

  KernelKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  std::string name() const;

 private:
  KernelKind kind_;
  double alpha_;
};

struct KernelPair {
  GreensKernel g1;  // momentum kernel
  GreensKernel g2;  // charge kernel
};

// Throws Error if the kernels cannot be used on this ambient space.
void check_kernels(const AmbientManifold& m, const KernelPair& k);

// Unit-weight point cloud of peakons in one dimension. Positions are evenly spaced
// (2 pi / n on the circle) with Gaussian jitter, momenta are positive, charges are
// Gaussian and gauges Haar-random.
struct EnsembleSampler {
  int nodes = 5;
  AmbientManifold ambient = AmbientManifold::euclidean(1);
  StructureGroup group = StructureGroup::rotation3();
  double spacing = 2.0;
  double jitter = 0.3;
  double momentum_min = 0.5;
  double momentum_scale = 1.0;
  double charge_scale = 0.1;
  double weight = 1.0;
};
CotangentState random_ensemble(const EnsembleSampler& opts, CounterRng& rng);

double collective_hamiltonian(const CotangentState& z, const KernelPair& k);

// (dQ, dP, eta, dsigma) = (Qdot, Pdot, xi = gamma-dot gamma^{-1}, sigma-dot).
StateTangent eom_rhs(const CotangentState& z, const KernelPair& k);

// Velocity pair (u, nu) = (sum w_j P_j G1(. - Q_j), sum w_j sigma_j^# G2(. - Q_j)).
LeftAlgebraElement collective_velocity(const CotangentState& z, const KernelPair& k);

struct StepOptions {
  double tol = 1e-12;
  int max_iter = 50;
};

// Implicit midpoint on (Q, P) with sigma' = coAd(exp(-dt xi_mid), sigma) and
// gamma' = exp(dt xi_mid) gamma. Throws NoConvergence.
CotangentState step(const CotangentState& z, double dt, const KernelPair& k,
                    const StepOptions& opts = {});

struct EnsembleTrajectory {
  double dt = 0.0;
  int stride = 1;                         // steps between snapshots
  std::vector<double> times;
  std::vector<CotangentState> states;
  std::vector<double> energy;
  std::vector<Field> charges;             // coAd(gamma_i, sigma_i)
  std::vector<Eigen::VectorXd> jl_values; // one entry per snapshot, one value per test pair

  double max_energy_drift() const;        // relative to the first snapshot
  double max_charge_drift() const;
  double max_casimir_drift() const;       // max | |sigma_i(t)| - |sigma_i(0)| |
};

EnsembleTrajectory simulate(const CotangentState& z0, const KernelPair& k, double dt,
                            double t_end, int stride = 1,
                            const std::vector<LeftAlgebraElement>& tests = {},
                            const StepOptions& opts = {});

// u(x) and nu(x) at the given points of a one-dimensional M; rows are points.
struct ReconstructedFields {
  Field u;
  Field nu;
};
ReconstructedFields reconstruct_fields(const CotangentState& z, const KernelPair& k,
                                       const Eigen::VectorXd& points);

// Spectral right-hand side of the trivialized EPAut equations on a periodic grid:
// m' = -(u m)_x - m u_x - n . nu_x,  n' = -(u n)_x - coad(nu, n).
struct EpautRate {
  Field m_dot;
  Field n_dot;
};
EpautRate epaut_rhs(const SourceManifold& grid, const StructureGroup& grp, const Field& m,
                    const Field& n, const Field& u, const Field& nu);

// Weak form of the EPAut equations for a Dirac momentum: d/dt jl(z)(xi') = -jl(z)([xi, xi'])
// with xi the collective velocity.
double weak_form_rate(const CotangentState& z, const KernelPair& k,
                      const LeftAlgebraElement& test);

// Max over interior snapshots and test pairs of |central difference of jl_values -
// weak_form_rate|. The trajectory must carry jl_values for `tests`.
double weak_consistency(const EnsembleTrajectory& traj, const KernelPair& k,
                        const std::vector<LeftAlgebraElement>& tests);

}  // namespace epaut
