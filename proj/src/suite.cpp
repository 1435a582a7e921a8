#include "confgeo/suite.hpp"

#include <algorithm>

#include "confgeo/errors.hpp"
#include "confgeo/parallel.hpp"

namespace confgeo {

std::vector<PointResult> analyze_grid(const ImmersionChart& chart, const Grid& grid,
                                      const Tolerances& tol) {
  std::vector<PointResult> out(grid.size());
  parallel_for(out.size(), [&](std::size_t i) {
    PointResult& r = out[i];
    r.u = grid.point(i);
    try {
      r.data = analyze_point(chart, r.u, tol);
      r.ok = true;
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  return out;
}

Branch expected_branch(const std::string& family) {
  if (family == "ex32") return Branch::ParallelANonParallelBPositive;
  if (family == "ex33") return Branch::ParallelANonParallelBNegative;
  if (family == "hxr" || family == "sxh" || family == "hxh" || family == "wp")
    return Branch::ParallelB;
  throw ValidationError("no expected branch for '" + family + "'");
}

CatalogCheck check_catalog_entry(const ChartSpec& spec, int per_axis, const Tolerances& tol) {
  CatalogCheck c;
  c.family = spec.name;
  c.m = spec.m;
  c.expected = expected_branch(spec.name);
  c.thresholds = identity_thresholds(spec.jet);
  try {
    const ImmersionChart chart = build_chart(spec);
    c.chart = chart.name();
    c.built = true;
    const Grid grid = default_grid(chart, per_axis);
    c.regular = validate_regularity(chart, grid, tol).regular;
    const ResidualSummary sum = identity_residuals(chart, grid, tol);
    c.residuals = sum.max;
    if (sum.failed_points > 0) c.error = sum.errors.front();
    const auto v = c.residuals.values(), t = c.thresholds.values();
    c.residuals_ok = sum.failed_points == 0;
    for (std::size_t i = 0; i < v.size(); ++i) c.residuals_ok = c.residuals_ok && v[i] <= t[i];
    for (const auto& p : sum.points) c.phi_max = std::max(c.phi_max, p.inv.Phi.norm());
    const ClassificationReport rep = classify_samples(chart.name(), sum.points, tol);
    c.got = rep.branch;
    c.failed_gate = rep.failed_gate;
  } catch (const Error& e) {
    c.error = e.what();
  }
  c.pass = c.built && c.regular && c.residuals_ok && c.phi_max <= 1e-6 && c.got == c.expected;
  return c;
}

std::vector<CatalogCheck> verify_catalog(const std::vector<int>& ms, int per_axis,
                                         const Tolerances& tol) {
  std::vector<CatalogCheck> out;
  for (const auto& name : catalog_names())
    for (int m : ms) {
      ChartSpec spec;
      try {
        spec = default_spec(name, m);
      } catch (const Error& e) {
        CatalogCheck c;
        c.family = name;
        c.m = m;
        c.expected = expected_branch(name);
        c.error = e.what();
        out.push_back(c);
        continue;
      }
      out.push_back(check_catalog_entry(spec, per_axis, tol));
    }
  return out;
}

}  // namespace confgeo
