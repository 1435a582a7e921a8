#pragma once

#include <span>
#include <vector>

namespace confgeo {

// Monomial bookkeeping for truncated multivariate Taylor polynomials in
// `vars` variables up to total degree `order`. Monomials are sorted by
// degree, so the monomials of degree <= d form a prefix of length size(d).
class JetLayout {
 public:
  // Layouts are cached for the lifetime of the process.
  static const JetLayout& get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size(int degree) const { return count_upto_[static_cast<std::size_t>(degree)]; }
  int degree(int index) const { return degree_[static_cast<std::size_t>(index)]; }
  const std::vector<int>& exponents(int index) const {
    return exponents_[static_cast<std::size_t>(index)];
  }
  // -1 when the multi-index is not representable
  int index_of(std::span<const int> exponents) const;
  // index of exponents(i) + exponents(j); valid for j < size(order - degree(i))
  const int* product_row(int i) const { return products_[static_cast<std::size_t>(i)].data(); }
  // index of exponents(i) + e_var, or -1 when it exceeds the order
  int raised(int var, int i) const { return raised_[static_cast<std::size_t>(var)][static_cast<std::size_t>(i)]; }
  // beta! for monomial i
  double factorial(int i) const { return factorial_[static_cast<std::size_t>(i)]; }

  JetLayout(int vars, int order);

 private:
  int vars_;
  int order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degree_;
  std::vector<int> count_upto_;
  std::vector<std::vector<int>> products_;
  std::vector<std::vector<int>> raised_;
  std::vector<double> factorial_;
};

// Truncated Taylor expansion f(u0 + d) = sum_beta c_beta d^beta, valid up to
// total degree order(). A Jet without a layout is an exact constant.
// Arithmetic truncates to the smaller order of its operands, so derived
// quantities always carry the order to which they are exact.
class Jet {
 public:
  Jet() : coeffs_{0.0} {}
  Jet(double value) : coeffs_{value} {}  // NOLINT: implicit by design of generic chart code

  static Jet variable(const JetLayout& layout, int var, double value);
  static Jet zero(const JetLayout& layout, int order);
  static std::vector<Jet> variables(const JetLayout& layout, std::span<const double> point);

  bool is_constant() const { return layout_ == nullptr; }
  const JetLayout* layout() const { return layout_; }
  // order of validity; constants are exact to any order
  int order() const;
  double value() const { return coeffs_[0]; }
  double coeff(int index) const;
  double& coeff_ref(int index) { return coeffs_[static_cast<std::size_t>(index)]; }
  // partial derivative d^beta f(u0) for monomial `index`
  double partial(int index) const;
  double partial(std::span<const int> exponents) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  // f(x) given the Taylor coefficients f^(k)(x0)/k! of a univariate f at x0 = value()
  Jet compose(std::span<const double> taylor) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, double b);
  friend Jet operator*(double a, const Jet& b) { return b * a; }

 private:
  Jet(const JetLayout* layout, int order, std::vector<double> coeffs)
      : layout_(layout), order_(order), coeffs_(std::move(coeffs)) {}

  const JetLayout* layout_ = nullptr;
  int order_ = 0;
  std::vector<double> coeffs_;
};

Jet inv(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double p);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);

inline double inv(double x) { return 1.0 / x; }
inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace confgeo
