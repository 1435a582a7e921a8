#include "confgeo/fd_jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace confgeo {

std::vector<double> central_weights(int deriv, int radius) {
  // Fornberg's recursion on nodes -radius..radius, expansion point 0.
  const int n = 2 * radius + 1;
  auto node = [&](int i) { return static_cast<double>(i - radius); };
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(deriv + 1), 0.0));
  auto at = [&](int j, int k) -> double& {
    return c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  };
  double c1 = 1.0;
  double c4 = node(0);
  at(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = node(i);
    for (int j = 0; j < i; ++j) {
      const double c3 = node(i) - node(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = at(j, deriv);
  return w;
}

int central_radius(int deriv, int accuracy) {
  int r = 0;
  while (2 * ((2 * r + 2 - deriv) / 2) < accuracy || 2 * r + 1 < deriv + 1) ++r;
  return r;
}

double fd_step(int deriv, const FdOptions& opts, std::span<const double> u) {
  if (opts.step > 0.0) return opts.step;
  double scale = 1.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  const double eps = std::numeric_limits<double>::epsilon();
  return std::pow(eps, 1.0 / (opts.order + deriv)) * scale;
}

double fd_reach(int jet_order, const FdOptions& opts, std::span<const double> u) {
  double reach = 0.0;
  for (int d = 1; d <= jet_order; ++d)
    for (int k = 1; k <= d; ++k)
      reach = std::max(reach, central_radius(k, opts.order) * fd_step(d, opts, u));
  return reach;
}

namespace {

struct Evaluator {
  const VectorField& f;
  std::span<const double> u;
  double h;
  std::map<std::vector<int>, std::vector<double>> cache;

  const std::vector<double>& at(const std::vector<int>& offset) {
    auto it = cache.find(offset);
    if (it != cache.end()) return it->second;
    std::vector<double> p(u.begin(), u.end());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += h * offset[i];
    return cache.emplace(offset, f(p)).first->second;
  }
};

// d^beta f(u) from one tensor-product stencil of spacing ev.h
std::vector<double> stencil_partial(Evaluator& ev, const std::vector<int>& beta, int accuracy,
                                    std::size_t out_dim) {
  const std::size_t m = beta.size();
  std::vector<int> axes;
  std::vector<std::vector<double>> weights;
  std::vector<int> radii;
  int total = 0;
  for (std::size_t a = 0; a < m; ++a) {
    if (beta[a] == 0) continue;
    const int r = central_radius(beta[a], accuracy);
    axes.push_back(static_cast<int>(a));
    radii.push_back(r);
    weights.push_back(central_weights(beta[a], r));
    total += beta[a];
  }
  std::vector<double> acc(out_dim, 0.0);
  std::vector<int> idx(axes.size(), 0);
  std::vector<int> offset(m, 0);
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      w *= weights[k][static_cast<std::size_t>(idx[k])];
      offset[static_cast<std::size_t>(axes[k])] = idx[k] - radii[k];
    }
    if (w != 0.0) {
      const auto& val = ev.at(offset);
      for (std::size_t i = 0; i < out_dim; ++i) acc[i] += w * val[i];
    }
    std::size_t k = 0;
    for (; k < axes.size(); ++k) {
      if (++idx[k] <= 2 * radii[k]) break;
      idx[k] = 0;
    }
    if (k == axes.size()) break;
  }
  const double scale = std::pow(ev.h, -total);
  for (double& v : acc) v *= scale;
  return acc;
}

}  // namespace

std::vector<Jet> fd_jet(const VectorField& f, std::span<const double> u, int jet_order,
                        const FdOptions& opts) {
  if (opts.order < 2 || opts.order % 2 != 0)
    throw std::invalid_argument("fd_jet: stencil order must be even and >= 2");
  const int m = static_cast<int>(u.size());
  const JetLayout& layout = JetLayout::get(m, jet_order);
  const std::vector<double> center = f(std::vector<double>(u.begin(), u.end()));
  const std::size_t dim = center.size();
  std::vector<Jet> out(dim, Jet::zero(layout, jet_order));
  for (std::size_t i = 0; i < dim; ++i) out[i].coeff_ref(0) = center[i];

  std::map<double, Evaluator> evaluators;
  auto evaluator = [&](double h) -> Evaluator& {
    auto it = evaluators.find(h);
    if (it == evaluators.end()) it = evaluators.emplace(h, Evaluator{f, u, h, {}}).first;
    return it->second;
  };

  for (int idx = 1; idx < layout.size(jet_order); ++idx) {
    const std::vector<int>& beta = layout.exponents(idx);
    const int d = layout.degree(idx);
    const double h = fd_step(d, opts, u);
    std::vector<double> partial = stencil_partial(evaluator(h), beta, opts.order, dim);
    if (opts.richardson && d >= 3) {
      const std::vector<double> fine = stencil_partial(evaluator(0.5 * h), beta, opts.order, dim);
      const double gain = std::pow(2.0, opts.order);
      for (std::size_t i = 0; i < dim; ++i)
        partial[i] = (gain * fine[i] - partial[i]) / (gain - 1.0);
    }
    const double fact = layout.factorial(idx);
    for (std::size_t i = 0; i < dim; ++i) out[i].coeff_ref(idx) = partial[i] / fact;
  }
  return out;
}

}  // namespace confgeo
