#pragma once

#include <string>
#include <vector>

#include "confgeo/catalog.hpp"
#include "confgeo/classifier.hpp"
#include "confgeo/invariants.hpp"

namespace confgeo {

// Full invariant data at every grid point; failures are kept per point.
struct PointResult {
  std::vector<double> u;
  bool ok = false;
  std::string error;
  ConformalData data;
};

std::vector<PointResult> analyze_grid(const ImmersionChart& chart, const Grid& grid,
                                      const Tolerances& tol = {});

// Branch each catalog family is expected to land in.
Branch expected_branch(const std::string& family);

struct CatalogCheck {
  std::string family;
  int m = 0;
  std::string chart;
  bool built = false;
  std::string error;
  bool regular = false;
  IdentityResiduals residuals;
  IdentityResiduals thresholds;
  bool residuals_ok = false;
  double phi_max = 0.0;
  Branch expected = Branch::Inconclusive;
  Branch got = Branch::Inconclusive;
  std::string failed_gate;
  bool pass = false;
};

CatalogCheck check_catalog_entry(const ChartSpec& spec, int per_axis, const Tolerances& tol = {});

// Every catalog family with default parameters in each dimension of `ms`.
std::vector<CatalogCheck> verify_catalog(const std::vector<int>& ms, int per_axis,
                                         const Tolerances& tol = {});

}  // namespace confgeo
