#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "epaut/lie_group.hpp"

namespace epaut {

enum class SourceKind { periodic_grid, point_cloud };

// Fields are stored with one row per node.
using Field = Eigen::MatrixXd;
using GroupField = std::vector<GroupElement>;

class SourceManifold {
 public:
  static SourceManifold periodic_grid(int n);
  static SourceManifold point_cloud(const Eigen::VectorXd& positions,
                                    const Eigen::VectorXd& weights);

  SourceKind kind() const { return kind_; }
  bool is_grid() const { return kind_ == SourceKind::periodic_grid; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double total_volume() const { return weights_.sum(); }
  double spacing() const;

 private:
  SourceKind kind_ = SourceKind::point_cloud;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

// Spectral derivative along S^1 (Nyquist mode zeroed); columns independent.
Field derivative(const SourceManifold& s, const Field& f);
// Dense matrix D with derivative(f) = D f.
Eigen::MatrixXd derivative_matrix(const SourceManifold& s);
double quadrature(const SourceManifold& s, const Eigen::VectorXd& f);

// Trigonometric interpolant of periodic samples on the grid.
class FourierInterpolant {
 public:
  FourierInterpolant(const SourceManifold& s, const Field& f);
  Eigen::VectorXd value(double x) const;
  Eigen::VectorXd derivative(double x, int order = 1) const;
  int components() const { return static_cast<int>(re_.cols()); }

 private:
  int n_;
  Eigen::VectorXd nodes_;
  Field samples_;
  // Coefficients of cos(kx) and sin(kx), k = 0..n/2.
  Eigen::MatrixXd re_;
  Eigen::MatrixXd im_;
};

// Monotone circle diffeomorphism sampled at the grid nodes.
class GridDiffeo {
 public:
  static GridDiffeo identity(const SourceManifold& s);
  static GridDiffeo shift(const SourceManifold& s, double offset);
  static GridDiffeo from_function(const SourceManifold& s, const std::function<double(double)>& psi,
                                  const std::function<double(double)>& dpsi);
  // Jacobian by spectral differentiation of lift - x.
  static GridDiffeo from_lift(const SourceManifold& s, const Eigen::VectorXd& lift);

  const Eigen::VectorXd& lift() const { return lift_; }
  const Eigen::VectorXd& jacobian() const { return jac_; }
  double max_jacobian_deviation() const { return (jac_.array() - 1.0).abs().maxCoeff(); }

 private:
  GridDiffeo(Eigen::VectorXd lift, Eigen::VectorXd jac);
  void validate() const;
  Eigen::VectorXd lift_;
  Eigen::VectorXd jac_;
};

Field interpolate(const SourceManifold& s, const Field& f, const Eigen::VectorXd& points);
Field resample(const SourceManifold& s, const Field& f, const GridDiffeo& psi);

GroupElement interpolate_group(const SourceManifold& s, const StructureGroup& grp,
                               const GroupField& g, double x);
GroupField resample(const SourceManifold& s, const StructureGroup& grp, const GroupField& g,
                    const GridDiffeo& psi);

// Unwrapped lift of a field whose columns are periodic modulo `period` up to a
// winding; winding(k) is the number of turns of column k.
struct LiftedField {
  Field lift;
  Eigen::VectorXi winding;
};
LiftedField unwrap(const SourceManifold& s, const Field& f, double period);
// Derivative of a field that winds modulo `period` (period <= 0: no winding).
Field derivative_wound(const SourceManifold& s, const Field& f, double period);
Field interpolate_wound(const SourceManifold& s, const Field& f, double period,
                        const Eigen::VectorXd& points);

// (D gamma) gamma^{-1} and gamma^{-1} (D gamma); rows are nodes, columns o-coordinates.
Field logderiv_right(const SourceManifold& s, const StructureGroup& grp, const GroupField& g);
Field logderiv_left(const SourceManifold& s, const StructureGroup& grp, const GroupField& g);
// Differential of logderiv_right along the right-trivialized tangent j = u_gamma gamma^{-1}.
Field d_logderiv(const SourceManifold& s, const StructureGroup& grp, const GroupField& g,
                 const Field& j);

GroupField constant_group_field(const StructureGroup& grp, int n, const GroupElement& g);
GroupField exp_field(const StructureGroup& grp, const Field& xi);
GroupField multiply(const GroupField& a, const GroupField& b);
GroupField inverse(const GroupField& a);
double max_distance(const GroupField& a, const GroupField& b);

}  // namespace epaut
