#pragma once

#include <functional>
#include <span>
#include <vector>

#include "confgeo/jet.hpp"

namespace confgeo {

using VectorField = std::function<std::vector<double>(const std::vector<double>&)>;

struct FdOptions {
  // accuracy order of the central stencils (even)
  int order = 4;
  // fixed step for every derivative order; 0 selects eps^(1/(order+d)) * max(1, |u|)
  double step = 0.0;
  // one Richardson step (h, h/2) for derivative orders >= 3; off by
  // default since the halved step is dominated by rounding for d >= 4
  bool richardson = false;
};

// Central finite-difference weights for the `deriv`-th derivative on the
// nodes -radius..radius (unit spacing).
std::vector<double> central_weights(int deriv, int radius);

// Smallest half-width giving a central stencil of at least `accuracy`.
int central_radius(int deriv, int accuracy);

double fd_step(int deriv, const FdOptions& opts, std::span<const double> u);

// Largest distance from u touched while building a jet of `jet_order`.
double fd_reach(int jet_order, const FdOptions& opts, std::span<const double> u);

// Taylor jet of f at u up to `jet_order`, every partial derivative taken
// from tensor-product central differences.
std::vector<Jet> fd_jet(const VectorField& f, std::span<const double> u, int jet_order,
                        const FdOptions& opts);

}  // namespace confgeo
