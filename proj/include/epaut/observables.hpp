#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace epaut {

// Value and first partials of a function on T*M x o* at (q, p, sigma).
// dsigma is the algebra element with dh = <delta sigma, dsigma>.
struct ObservableValue {
  double value = 0.0;
  Eigen::VectorXd dq;
  Eigen::VectorXd dp;
  Eigen::VectorXd dsigma;
};

class Observable {
 public:
  using Evaluator = std::function<ObservableValue(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                                                  const Eigen::VectorXd& sigma)>;

  // Checks the partials against central differences at fixed probe points and
  // throws Error above rel. 1e-6 unless `validate` is false.
  Observable(int d, int m, Evaluator eval, std::string name, bool validate = true);

  static Observable constant(int d, int m, double c);
  // cos(k.q) or sin(k.q), times prod_i p_i^powers_i, times prod of sigma components
  // listed in `sigma_factors` (0, 1 or 2 entries).
  static Observable monomial(const Eigen::VectorXi& k, bool sine, const Eigen::VectorXi& powers,
                             const std::vector<int>& sigma_factors, int m);
  // <sigma, xi>
  static Observable linear_sigma(int d, const Eigen::VectorXd& xi);
  // Value-only function; partials by central differences with step h.
  static Observable from_value(int d, int m,
                               std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                                    const Eigen::VectorXd&)> f,
                               std::string name, double h = 1e-5);

  int d() const { return d_; }
  int m() const { return m_; }
  const std::string& name() const { return name_; }
  ObservableValue evaluate(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                           const Eigen::VectorXd& sigma) const {
    return eval_(q, p, sigma);
  }
  double value(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
               const Eigen::VectorXd& sigma) const {
    return eval_(q, p, sigma).value;
  }
  // Max relative mismatch of the partials against central differences at (q, p, sigma).
  double partials_error(const Eigen::VectorXd& q, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& sigma, double h = 1e-6) const;

  Observable operator+(const Observable& other) const;
  Observable scaled(double c) const;

 private:
  int d_ = 0;
  int m_ = 0;
  Evaluator eval_;
  std::string name_;
};

// Fourier modes in q with |k|_1 <= k_max (half-plane, cos and sin), times monomials in p
// of degree <= p_degree, times {1, sigma_a} and, if requested, {sigma_a sigma_b}.
std::vector<Observable> observable_basis(int d, int m, int k_max, int p_degree,
                                         bool quadratic_sigma = true);

// Random combination of `terms` basis monomials with coefficients scale * N(0,1).
// Terms quadratic in p give Riccati-type growth, so flows want scale <= 0.15.
Observable random_observable(int d, int m, std::uint64_t seed, double scale = 0.15,
                             int k_max = 2, int terms = 6, int p_degree = 2);

}  // namespace epaut
