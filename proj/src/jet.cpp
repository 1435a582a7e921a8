#include "confgeo/jet.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace confgeo {

namespace {

void enumerate(int vars, int degree, int var, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    cur[static_cast<std::size_t>(var)] = degree;
    out.push_back(cur);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[static_cast<std::size_t>(var)] = k;
    enumerate(vars, degree - k, var + 1, cur, out);
  }
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 1 || order < 0) throw std::invalid_argument("JetLayout: bad dimensions");
  std::vector<int> cur(static_cast<std::size_t>(vars), 0);
  for (int d = 0; d <= order; ++d) {
    enumerate(vars, d, 0, cur, exponents_);
    count_upto_.push_back(static_cast<int>(exponents_.size()));
  }
  std::map<std::vector<int>, int> lookup;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    lookup[exponents_[i]] = static_cast<int>(i);
    int deg = 0;
    double fact = 1.0;
    for (int e : exponents_[i]) {
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degree_.push_back(deg);
    factorial_.push_back(fact);
  }
  const int n = static_cast<int>(exponents_.size());
  products_.resize(static_cast<std::size_t>(n));
  std::vector<int> sum(static_cast<std::size_t>(vars));
  for (int i = 0; i < n; ++i) {
    const int nj = size(order - degree(i));
    auto& row = products_[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(nj));
    for (int j = 0; j < nj; ++j) {
      for (int v = 0; v < vars; ++v)
        sum[static_cast<std::size_t>(v)] = exponents(i)[static_cast<std::size_t>(v)] +
                                           exponents(j)[static_cast<std::size_t>(v)];
      row[static_cast<std::size_t>(j)] = lookup.at(sum);
    }
  }
  raised_.assign(static_cast<std::size_t>(vars), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int v = 0; v < vars; ++v) {
    for (int i = 0; i < n; ++i) {
      if (degree(i) == order) continue;
      sum = exponents(i);
      ++sum[static_cast<std::size_t>(v)];
      raised_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] = lookup.at(sum);
    }
  }
}

const JetLayout& JetLayout::get(int vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_unique<JetLayout>(vars, order);
  return *slot;
}

int JetLayout::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != vars_) return -1;
  int deg = 0;
  for (int e : exps) {
    if (e < 0) return -1;
    deg += e;
  }
  if (deg > order_) return -1;
  const int lo = deg == 0 ? 0 : size(deg - 1);
  for (int i = lo; i < size(deg); ++i)
    if (std::equal(exps.begin(), exps.end(), exponents(i).begin())) return i;
  return -1;
}

Jet Jet::variable(const JetLayout& layout, int var, double value) {
  std::vector<double> c(static_cast<std::size_t>(layout.size(layout.order())), 0.0);
  c[0] = value;
  if (layout.order() >= 1) c[static_cast<std::size_t>(1 + var)] = 1.0;
  return {&layout, layout.order(), std::move(c)};
}

Jet Jet::zero(const JetLayout& layout, int order) {
  return {&layout, order, std::vector<double>(static_cast<std::size_t>(layout.size(order)), 0.0)};
}

std::vector<Jet> Jet::variables(const JetLayout& layout, std::span<const double> point) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i)
    out.push_back(variable(layout, static_cast<int>(i), point[i]));
  return out;
}

int Jet::order() const { return layout_ ? order_ : INT_MAX; }

double Jet::coeff(int index) const {
  if (index < static_cast<int>(coeffs_.size())) return coeffs_[static_cast<std::size_t>(index)];
  if (layout_ == nullptr) return 0.0;
  throw std::out_of_range("Jet::coeff beyond truncation order");
}

double Jet::partial(int index) const {
  const double f = layout_ ? layout_->factorial(index) : 1.0;
  return coeff(index) * f;
}

double Jet::partial(std::span<const int> exponents) const {
  if (layout_ == nullptr) {
    for (int e : exponents)
      if (e != 0) return 0.0;
    return coeffs_[0];
  }
  const int idx = layout_->index_of(exponents);
  if (idx < 0 || layout_->degree(idx) > order_)
    throw std::out_of_range("Jet::partial beyond truncation order");
  return partial(idx);
}

Jet Jet::derivative(int var) const {
  if (layout_ == nullptr) return Jet(0.0);
  if (order_ == 0) throw std::logic_error("Jet::derivative of an order-0 jet");
  const int o = order_ - 1;
  std::vector<double> c(static_cast<std::size_t>(layout_->size(o)));
  for (int i = 0; i < layout_->size(o); ++i) {
    const int up = layout_->raised(var, i);
    const double mult = layout_->exponents(i)[static_cast<std::size_t>(var)] + 1;
    c[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(up)] * mult;
  }
  return {layout_, o, std::move(c)};
}

Jet Jet::truncated(int order) const {
  if (layout_ == nullptr || order >= order_) return *this;
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + layout_->size(order));
  return {layout_, order, std::move(c)};
}

Jet Jet::compose(std::span<const double> taylor) const {
  if (layout_ == nullptr) return Jet(taylor[0]);
  const int o = std::min<int>(order_, static_cast<int>(taylor.size()) - 1);
  Jet delta = truncated(o);
  delta.coeffs_[0] = 0.0;
  Jet r(taylor[static_cast<std::size_t>(o)]);
  for (int k = o - 1; k >= 0; --k) {
    r = r * delta;
    r.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
  }
  if (r.layout_ == nullptr) return Jet::zero(*layout_, o) + r;
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

namespace {

const JetLayout* common_layout(const Jet& a, const Jet& b) {
  if (a.layout() && b.layout() && a.layout() != b.layout())
    throw std::invalid_argument("Jet: mixing layouts");
  return a.layout() ? a.layout() : b.layout();
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) {
  const JetLayout* L = common_layout(a, b);
  if (L == nullptr) return Jet(a.coeffs_[0] + b.coeffs_[0]);
  if (a.layout_ == nullptr) {
    Jet r = b;
    r.coeffs_[0] += a.coeffs_[0];
    return r;
  }
  if (b.layout_ == nullptr) {
    Jet r = a;
    r.coeffs_[0] += b.coeffs_[0];
    return r;
  }
  const int o = std::min(a.order_, b.order_);
  std::vector<double> c(static_cast<std::size_t>(L->size(o)));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs_[i] + b.coeffs_[i];
  return {L, o, std::move(c)};
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, double b) {
  Jet r = a;
  for (double& c : r.coeffs_) c *= b;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout* L = common_layout(a, b);
  if (a.layout_ == nullptr) return b * a.coeffs_[0];
  if (b.layout_ == nullptr) return a * b.coeffs_[0];
  const int o = std::min(a.order_, b.order_);
  std::vector<double> c(static_cast<std::size_t>(L->size(o)), 0.0);
  const double* bc = b.coeffs_.data();
  for (int i = 0; i < L->size(o); ++i) {
    const double ai = a.coeffs_[static_cast<std::size_t>(i)];
    if (ai == 0.0) continue;
    const int nj = L->size(o - L->degree(i));
    const int* row = L->product_row(i);
    for (int j = 0; j < nj; ++j) c[static_cast<std::size_t>(row[j])] += ai * bc[j];
  }
  return {L, o, std::move(c)};
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.layout_ == nullptr) return a * (1.0 / b.coeffs_[0]);
  return a * inv(b);
}

Jet& Jet::operator+=(const Jet& o) { return *this = *this + o; }
Jet& Jet::operator-=(const Jet& o) { return *this = *this - o; }
Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

namespace {

int taylor_len(const Jet& x) { return x.is_constant() ? 1 : x.order() + 1; }

}  // namespace

Jet inv(const Jet& x) {
  const double a = x.value();
  if (a == 0.0) throw std::domain_error("Jet inv: division by zero");
  std::vector<double> t(static_cast<std::size_t>(taylor_len(x)));
  double p = 1.0 / a;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = p;
    p *= -1.0 / a;
  }
  return x.compose(t);
}

Jet pow(const Jet& x, double e) {
  const double a = x.value();
  std::vector<double> t(static_cast<std::size_t>(taylor_len(x)));
  double binom = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = binom * std::pow(a, e - static_cast<double>(k));
    binom *= (e - static_cast<double>(k)) / static_cast<double>(k + 1);
  }
  return x.compose(t);
}

Jet sqrt(const Jet& x) {
  if (!(x.value() > 0.0)) {
    if (x.is_constant() && x.value() == 0.0) return Jet(0.0);
    throw std::domain_error("Jet sqrt: non-positive argument");
  }
  return pow(x, 0.5);
}

Jet exp(const Jet& x) {
  std::vector<double> t(static_cast<std::size_t>(taylor_len(x)));
  double f = std::exp(x.value());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = f;
    f /= static_cast<double>(k + 1);
  }
  return x.compose(t);
}

Jet log(const Jet& x) {
  const double a = x.value();
  if (!(a > 0.0)) throw std::domain_error("Jet log: non-positive argument");
  std::vector<double> t(static_cast<std::size_t>(taylor_len(x)));
  t[0] = std::log(a);
  for (std::size_t k = 1; k < t.size(); ++k)
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * std::pow(a, static_cast<double>(k)));
  return x.compose(t);
}

namespace {

// derivative cycle d0, d1, d2, d3 repeating with period 4 (sin/cos) or
// period 2 (sinh/cosh)
Jet periodic(const Jet& x, const double* cycle, std::size_t period) {
  std::vector<double> t(static_cast<std::size_t>(taylor_len(x)));
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = cycle[k % period] / fact;
  }
  return x.compose(t);
}

}  // namespace

Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[4] = {s, c, -s, -c};
  return periodic(x, cycle, 4);
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[4] = {c, -s, -c, s};
  return periodic(x, cycle, 4);
}

Jet sinh(const Jet& x) {
  const double cycle[2] = {std::sinh(x.value()), std::cosh(x.value())};
  return periodic(x, cycle, 2);
}

Jet cosh(const Jet& x) {
  const double cycle[2] = {std::cosh(x.value()), std::sinh(x.value())};
  return periodic(x, cycle, 2);
}

}  // namespace confgeo
