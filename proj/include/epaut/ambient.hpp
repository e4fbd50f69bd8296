#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epaut/lie_group.hpp"
#include "epaut/source_grid.hpp"

namespace epaut {

enum class AmbientKind { euclidean, torus };

class AmbientManifold {
 public:
  static AmbientManifold euclidean(int d);
  static AmbientManifold torus(int d);

  AmbientKind kind() const { return kind_; }
  int dim() const { return d_; }
  // Period of each torus coordinate; 0 for Euclidean space.
  double period() const;
  Eigen::VectorXd displacement(const Eigen::VectorXd& from, const Eigen::VectorXd& to) const;
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return displacement(a, b).norm();
  }
  // Curves Q: S^1 -> M stored as unreduced lifts on the torus.
  Field curve_derivative(const SourceManifold& s, const Field& q) const;
  Field curve_interpolate(const SourceManifold& s, const Field& q,
                          const Eigen::VectorXd& points) const;

 private:
  AmbientKind kind_ = AmbientKind::euclidean;
  int d_ = 1;
};

// Smooth map M -> R^k with its Jacobian.
class AmbientField {
 public:
  using Evaluator =
      std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& value, Eigen::MatrixXd& jac)>;

  AmbientField() = default;
  AmbientField(int dim_in, int dim_out, Evaluator eval);
  static AmbientField zero(int dim_in, int dim_out);
  static AmbientField constant(int dim_in, const Eigen::VectorXd& value);
  // Value-only field; Jacobian by central differences with step `h`.
  static AmbientField from_value(int dim_in, int dim_out,
                                 std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f,
                                 double h = 1e-6);

  int dim_in() const { return in_; }
  int dim_out() const { return out_; }
  void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& value, Eigen::MatrixXd& jac) const;
  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  AmbientField operator+(const AmbientField& other) const;
  AmbientField scaled(double c) const;
  // Embeds a scalar field into component `index` of an R^dim_out-valued field.
  static AmbientField component(const AmbientField& scalar, int index, int dim_out);

 private:
  int in_ = 0;
  int out_ = 0;
  Evaluator eval_;
};

AmbientField fourier_mode(const Eigen::VectorXi& k, bool sine);
AmbientField hermite_mode(const Eigen::VectorXi& n, const Eigen::VectorXd& center, double scale);

struct ScalarBasisOptions {
  Eigen::VectorXd center;  // envelope center on R^d (defaults to origin)
  double scale = 1.0;      // envelope width on R^d
};

// Fourier modes with |k|_1 <= K on T^d; normalized Hermite functions of total
// degree <= K on R^d.
std::vector<AmbientField> scalar_basis(const AmbientManifold& m, int k,
                                       const ScalarBasisOptions& opts = {});

// Element (u, nu) of the semidirect Lie algebra X(M) x| F(M, o).
struct LeftAlgebraElement {
  AmbientField u;
  AmbientField nu;
};

LeftAlgebraElement zero_left_element(const AmbientManifold& m, const StructureGroup& grp);
LeftAlgebraElement scaled(const LeftAlgebraElement& a, double c);
LeftAlgebraElement sum(const LeftAlgebraElement& a, const LeftAlgebraElement& b);
// Group bracket, the derivative of Ad_{exp(t a)} b at t = 0:
// ((Du)u' - (Du')u, (Dnu)u' - (Dnu')u + [nu, nu']). On the vector-field part this
// is minus the Jacobi-Lie bracket. Jacobian of the result by finite differences.
LeftAlgebraElement bracket(const LeftAlgebraElement& a, const LeftAlgebraElement& b,
                           const StructureGroup& grp);

// Scalar basis times unit vectors in TM, then times unit vectors in o.
std::vector<LeftAlgebraElement> left_basis(const AmbientManifold& m, const StructureGroup& grp,
                                           int k, const ScalarBasisOptions& opts = {});

}  // namespace epaut
