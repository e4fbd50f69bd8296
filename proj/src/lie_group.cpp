#include "epaut/lie_group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace epaut {

namespace {

constexpr double kPi = std::numbers::pi;

// Coefficients of Rodrigues-type series; Taylor fallback near zero.
double sinc(double t) { return std::abs(t) < 1e-4 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }
double cosc(double t) {
  return std::abs(t) < 1e-4 ? 0.5 - t * t / 24.0 : (1.0 - std::cos(t)) / (t * t);
}
double sinc3(double t) {
  return std::abs(t) < 1e-4 ? 1.0 / 6.0 - t * t / 120.0 : (t - std::sin(t)) / (t * t * t);
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& w) {
  const double t = w.norm();
  const Eigen::Matrix3d k = hat(w);
  return Eigen::Matrix3d::Identity() + sinc(t) * k + cosc(t) * k * k;
}

}  // namespace

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

GroupElement GroupElement::identity(GroupKind kind) {
  GroupElement g;
  g.kind_ = kind;
  return g;
}

GroupElement GroupElement::from_angle(double angle) {
  GroupElement g;
  g.kind_ = GroupKind::circle;
  g.angle_ = angle;
  return g;
}

GroupElement GroupElement::from_rotation(const Eigen::Matrix3d& r) {
  if ((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() > 1e-10 || r.determinant() < 0)
    throw Error("GroupElement: matrix is not a rotation");
  GroupElement g;
  g.kind_ = GroupKind::rotation3;
  g.rot_ = r;
  return g;
}

double GroupElement::reduced_angle() const {
  double a = std::fmod(angle_, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}

Eigen::Matrix3d GroupElement::matrix() const {
  if (kind_ == GroupKind::rotation3) return rot_;
  return rodrigues(Eigen::Vector3d(0, 0, angle_));
}

Eigen::VectorXd GroupElement::coordinates() const {
  if (kind_ == GroupKind::circle) return Eigen::VectorXd::Constant(1, reduced_angle());
  Eigen::VectorXd c(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(3 * i + j) = rot_(i, j);
  return c;
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (kind_ != other.kind_) throw Error("GroupElement: kind mismatch in product");
  GroupElement g = *this;
  if (kind_ == GroupKind::circle) {
    g.angle_ = angle_ + other.angle_;
  } else {
    g.rot_ = rot_ * other.rot_;
  }
  return g;
}

GroupElement GroupElement::inverse() const {
  GroupElement g = *this;
  g.angle_ = -angle_;
  g.rot_ = rot_.transpose();
  return g;
}

double GroupElement::distance(const GroupElement& other) const {
  if (kind_ == GroupKind::circle) {
    const double d = std::remainder(angle_ - other.angle_, 2 * kPi);
    return std::abs(d);
  }
  return (rot_ - other.rot_).norm();
}

StructureGroup::StructureGroup(GroupKind kind) : kind_(kind) {
  // Circle: length 2*pi*sqrt(c) = 1. SO(3): volume 8 pi^2 c^{3/2} = 1 under the
  // metric in which the hat basis is orthonormal.
  tau_scale_ = kind == GroupKind::circle ? 1.0 / (4 * kPi * kPi)
                                         : std::pow(8 * kPi * kPi, -2.0 / 3.0);
}

StructureGroup StructureGroup::circle() { return StructureGroup(GroupKind::circle); }
StructureGroup StructureGroup::rotation3() { return StructureGroup(GroupKind::rotation3); }

double StructureGroup::structure_constant(int c, int a, int b) const {
  if (kind_ == GroupKind::circle) return 0.0;
  // Levi-Civita symbol epsilon_{abc}.
  if (a == b || b == c || a == c) return 0.0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

Eigen::MatrixXd StructureGroup::tau() const {
  return tau_scale_ * Eigen::MatrixXd::Identity(dim(), dim());
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& a) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

GroupElement StructureGroup::exp(const AlgebraVector& xi) const {
  if (kind_ == GroupKind::circle) return GroupElement::from_angle(xi(0));
  return GroupElement::from_rotation(rodrigues(Eigen::Vector3d(xi(0), xi(1), xi(2))));
}

AlgebraVector StructureGroup::log(const GroupElement& g) const {
  if (kind_ == GroupKind::circle) return AlgebraVector::Constant(1, g.angle());
  const Eigen::Matrix3d& r = g.rotation();
  const double tr = r.trace();
  if (tr <= -1.0 + 1e-9) throw CutLocus("rotation angle too close to pi");
  const double c = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
  const double t = std::acos(c);
  const double factor = t < 1e-4 ? 0.5 + t * t / 12.0 : t / (2.0 * std::sin(t));
  const Eigen::Vector3d w = factor * Eigen::Vector3d(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0),
                                                     r(1, 0) - r(0, 1));
  return w;
}

AlgebraVector StructureGroup::ad(const AlgebraVector& xi, const AlgebraVector& eta) const {
  if (kind_ == GroupKind::circle) return AlgebraVector::Zero(1);
  return Eigen::Vector3d(xi(0), xi(1), xi(2)).cross(Eigen::Vector3d(eta(0), eta(1), eta(2)));
}

AlgebraVector StructureGroup::Ad(const GroupElement& g, const AlgebraVector& xi) const {
  if (kind_ == GroupKind::circle) return xi;
  return g.rotation() * Eigen::Vector3d(xi(0), xi(1), xi(2));
}

CoalgebraVector StructureGroup::coAd(const GroupElement& g, const CoalgebraVector& sigma) const {
  if (kind_ == GroupKind::circle) return sigma;
  return g.rotation().transpose() * Eigen::Vector3d(sigma(0), sigma(1), sigma(2));
}

CoalgebraVector StructureGroup::coad(const AlgebraVector& xi, const CoalgebraVector& sigma) const {
  if (kind_ == GroupKind::circle) return CoalgebraVector::Zero(1);
  // <coad(xi,s), eta> = <s, xi x eta> = <s x xi, eta>.
  return Eigen::Vector3d(sigma(0), sigma(1), sigma(2)).cross(Eigen::Vector3d(xi(0), xi(1), xi(2)));
}

Eigen::MatrixXd StructureGroup::ad_matrix(const AlgebraVector& xi) const {
  if (kind_ == GroupKind::circle) return Eigen::MatrixXd::Zero(1, 1);
  return hat(Eigen::Vector3d(xi(0), xi(1), xi(2)));
}

Eigen::MatrixXd StructureGroup::Ad_matrix(const GroupElement& g) const {
  if (kind_ == GroupKind::circle) return Eigen::MatrixXd::Identity(1, 1);
  return g.rotation();
}

Eigen::MatrixXd StructureGroup::coad_matrix(const CoalgebraVector& sigma) const {
  if (kind_ == GroupKind::circle) return Eigen::MatrixXd::Zero(1, 1);
  return hat(Eigen::Vector3d(sigma(0), sigma(1), sigma(2)));
}

AlgebraVector StructureGroup::sharp(const CoalgebraVector& sigma) const {
  return sigma / tau_scale_;
}

CoalgebraVector StructureGroup::flat(const AlgebraVector& xi) const { return xi * tau_scale_; }

double StructureGroup::tau_pair(const AlgebraVector& xi, const AlgebraVector& eta) const {
  return tau_scale_ * xi.dot(eta);
}

double StructureGroup::tau_star(const CoalgebraVector& a, const CoalgebraVector& b) const {
  return a.dot(b) / tau_scale_;
}

Eigen::MatrixXd StructureGroup::dexp(const AlgebraVector& xi) const {
  if (kind_ == GroupKind::circle) return Eigen::MatrixXd::Identity(1, 1);
  const Eigen::Vector3d w(xi(0), xi(1), xi(2));
  const double t = w.norm();
  const Eigen::Matrix3d k = hat(w);
  return Eigen::Matrix3d::Identity() + cosc(t) * k + sinc3(t) * k * k;
}

Eigen::MatrixXd StructureGroup::dexp_inverse(const AlgebraVector& xi) const {
  if (kind_ == GroupKind::circle) return Eigen::MatrixXd::Identity(1, 1);
  const Eigen::Vector3d w(xi(0), xi(1), xi(2));
  const double t = w.norm();
  const Eigen::Matrix3d k = hat(w);
  const double c = t < 1e-4 ? 1.0 / 12.0 + t * t / 720.0
                            : 1.0 / (t * t) - (1.0 + std::cos(t)) / (2.0 * t * std::sin(t));
  return Eigen::Matrix3d::Identity() - 0.5 * k + c * k * k;
}

}  // namespace epaut
