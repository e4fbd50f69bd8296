#pragma once

#include <Eigen/Dense>

#include "epaut/lie_group.hpp"
#include "epaut/source_grid.hpp"

namespace epaut {

// Uniform n^d grid on the flat torus [0, 2 pi)^d; node (i_0, ..., i_{d-1}) is stored
// at row i_0 + n i_1 + n^2 i_2.
class TorusGrid {
 public:
  TorusGrid(int n, int d);
  int n() const { return n_; }
  int d() const { return d_; }
  int size() const { return size_; }
  double cell_volume() const;
  // Coordinates of all nodes, one row per node.
  Field coordinates() const;
  // Spectral derivative along `axis`, Nyquist mode zeroed; columns independent.
  Field derivative(const Field& f, int axis) const;
  Eigen::VectorXd divergence(const Field& u) const;
  // Rows: nodes; columns: gradient components.
  Field gradient(const Eigen::VectorXd& f) const;
  // Mean-zero solution of divergence(gradient(p)) = f; the mean of f and modes
  // with a Nyquist index are dropped.
  Eigen::VectorXd poisson(const Eigen::VectorXd& f) const;
  double integrate(const Eigen::VectorXd& f) const { return cell_volume() * f.sum(); }

 private:
  int n_, d_, size_;
};

// Tendencies of the trivialized EPAut_vol system for l = 1/2 |u|^2 + 1/2 tau(nu, nu):
// m = u, n = flat(nu),
//   dm/dt = -(u.grad) m - (grad u)^T m - n_a grad nu_a - grad p,
//   dn/dt = -(u.grad) n - coad(nu, n),
// with p the mean-zero pressure that makes dm/dt divergence free.
struct EpautVolRate {
  Field dm;
  Field dn;
  Eigen::VectorXd pressure;
};

// Throws NotDivergenceFree if max |div u| exceeds div_tol * max(1, max |u|).
EpautVolRate epautvol_rhs(const TorusGrid& grid, const StructureGroup& grp, const Field& u,
                          const Field& nu, double div_tol = 1e-10);

}  // namespace epaut
