#pragma once

#include <Eigen/Dense>

#include "epaut/errors.hpp"

namespace epaut {

enum class GroupKind { circle, rotation3 };

// Coordinates in the fixed basis of o (algebra) or its dual basis (coalgebra).
using AlgebraVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using CoalgebraVector = AlgebraVector;

class GroupElement {
 public:
  GroupElement() = default;
  static GroupElement identity(GroupKind kind);
  static GroupElement from_angle(double angle);
  static GroupElement from_rotation(const Eigen::Matrix3d& r);

  GroupKind kind() const { return kind_; }
  // Unreduced angle; only meaningful for circle elements.
  double angle() const { return angle_; }
  double reduced_angle() const;
  const Eigen::Matrix3d& rotation() const { return rot_; }
  // U(1) is embedded as rotations about e3.
  Eigen::Matrix3d matrix() const;
  // Coordinates written to snapshots: angle (reduced) or 9 row-major entries.
  Eigen::VectorXd coordinates() const;

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
  double distance(const GroupElement& other) const;

 private:
  GroupKind kind_ = GroupKind::circle;
  double angle_ = 0.0;
  Eigen::Matrix3d rot_ = Eigen::Matrix3d::Identity();
};

Eigen::Matrix3d hat(const Eigen::Vector3d& w);
Eigen::Vector3d vee(const Eigen::Matrix3d& m);
// Closest rotation in the Frobenius norm (SVD).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& a);

class StructureGroup {
 public:
  static StructureGroup circle();
  static StructureGroup rotation3();

  GroupKind kind() const { return kind_; }
  int dim() const { return kind_ == GroupKind::circle ? 1 : 3; }
  // C^c_{ab} with [e_a, e_b] = C^c_{ab} e_c.
  double structure_constant(int c, int a, int b) const;
  // tau = scale * identity in the fixed basis; scale fixes Haar volume 1.
  double tau_scale() const { return tau_scale_; }
  Eigen::MatrixXd tau() const;

  GroupElement identity() const { return GroupElement::identity(kind_); }
  GroupElement exp(const AlgebraVector& xi) const;
  AlgebraVector log(const GroupElement& g) const;

  AlgebraVector ad(const AlgebraVector& xi, const AlgebraVector& eta) const;
  AlgebraVector Ad(const GroupElement& g, const AlgebraVector& xi) const;
  CoalgebraVector coAd(const GroupElement& g, const CoalgebraVector& sigma) const;
  CoalgebraVector coad(const AlgebraVector& xi, const CoalgebraVector& sigma) const;

  // Matrix of eta -> ad(xi, eta).
  Eigen::MatrixXd ad_matrix(const AlgebraVector& xi) const;
  Eigen::MatrixXd Ad_matrix(const GroupElement& g) const;
  // Matrix of xi -> coad(xi, sigma).
  Eigen::MatrixXd coad_matrix(const CoalgebraVector& sigma) const;

  AlgebraVector sharp(const CoalgebraVector& sigma) const;
  CoalgebraVector flat(const AlgebraVector& xi) const;
  double tau_pair(const AlgebraVector& xi, const AlgebraVector& eta) const;
  double tau_star(const CoalgebraVector& a, const CoalgebraVector& b) const;

  // Right-trivialized differential of exp: d/dt exp(xi + t eta) exp(xi)^{-1}.
  Eigen::MatrixXd dexp(const AlgebraVector& xi) const;
  Eigen::MatrixXd dexp_inverse(const AlgebraVector& xi) const;

  AlgebraVector zero() const { return AlgebraVector::Zero(dim()); }

 private:
  explicit StructureGroup(GroupKind kind);
  GroupKind kind_;
  double tau_scale_;
};

}  // namespace epaut
