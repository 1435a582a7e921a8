#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "confgeo/chart.hpp"
#include "confgeo/tolerances.hpp"

namespace confgeo {

using Params = std::map<std::string, double>;

// Everything needed to rebuild a chart; mirrors the chart definition file.
struct ChartSpec {
  std::string name;  // hxr sxh hxh wp ex32 ex33 | graph umbilic
  int m = 0;
  AmbientForm ambient;  // native ambient of the formula
  Params params;
  Box domain;
  JetSource jet = JetSource::Analytic;
  FdOptions fd;
  std::string lift;  // map name applied on demand, empty for none

  friend bool operator==(const ChartSpec&, const ChartSpec&);
};

// The six families with fixed expectations.
const std::vector<std::string>& catalog_names();
// Extra formula templates (not part of the classification table).
const std::vector<std::string>& template_names();

// Default parameters, domain and lift for a family in dimension m, with
// `overrides` merged into the parameters. Throws ValidationError naming the
// violated bound.
ChartSpec default_spec(const std::string& name, int m, const Params& overrides = {});
void validate_spec(const ChartSpec& spec);

// Chart in the native ambient recorded in `spec`.
ImmersionChart build_native(const ChartSpec& spec);
// Native chart followed by its lift, if one is set.
ImmersionChart build_chart(const ChartSpec& spec);

// H^k x R^{m-k} (hxr), S^{m-k}(a) x H^k (sxh), H^k(-1/a^2) x H^{m-k} (hxh)
ImmersionChart make_product(const std::string& family, int m, const Params& params = {});
// WP(p,q,a) in R^{m+1}_1
ImmersionChart make_wp(int p, int q, double a, int m);
// Assembled ex32 / ex33 charts in S^{m+1}_1. r <= 0 selects the radius
// that makes the core satisfy the scalar-curvature condition.
ImmersionChart make_example(const std::string& family, int m, int K, int split, double r = 0.0);

// Maximal core hypersurface of the assembled examples.
struct CoreHypersurface {
  ImmersionChart chart;  // K-dimensional, in S^{K+1}_1(r) or H^{K+1}_1(-1/r^2)
  int m = 0;
  int K = 0;
  double r = 0.0;
  bool anti_de_sitter = false;
  std::string label;
};

// Witness core for ex33: H^j(c1) x H^{K-j}(c2) in H^{K+1}_1(-1/r^2) with
// c1^2 = j r^2 / K, c2^2 = (K-j) r^2 / K (zero mean curvature, |h|^2 = K/r^2).
// For ex32 no product core is maximal; throws ConstructionError carrying
// the smallest attainable r*|H|.
CoreHypersurface make_core(const std::string& family, int m, int K, int split, double r = 0.0);
// Totally geodesic slice of H^{K+1}_1(-1/r^2); fails verify_core.
CoreHypersurface totally_geodesic_core(int m, int K, double r);
// Radius solving |h|^2 = (m-1)/m for the ex33 witness core.
double example_radius(int m, int K);

struct CoreReport {
  double H_residual = 0.0;          // max |H|
  double norm_h2_deviation = 0.0;   // max ||h|^2 - (m-1)/m|
  double scalar_deviation = 0.0;    // max |S - prescribed scalar curvature|
  double norm_h2_spread = 0.0;      // max - min of |h|^2 over the grid
  bool accepted = false;
  std::string label;
};

CoreReport verify_core(const CoreHypersurface& core, int per_axis = 3, const Tolerances& tol = {});

// Chart definition file (JSON) round trip.
nlohmann::json spec_to_json(const ChartSpec& spec);
ChartSpec spec_from_json(const nlohmann::json& doc);

}  // namespace confgeo
