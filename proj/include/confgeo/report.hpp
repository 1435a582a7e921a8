#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "confgeo/classifier.hpp"
#include "confgeo/suite.hpp"

namespace confgeo {

// %.17g, the CSV number format
std::string format_double(double v);

// Short description of what each identity residual measures, keyed like
// IdentityResiduals::names().
const std::string& identity_anchor(const std::string& name);

nlohmann::json tolerances_json(const Tolerances& tol);
nlohmann::json grid_json(const Grid& grid);
nlohmann::json chart_json(const ImmersionChart& chart);

nlohmann::json analyze_json(const ImmersionChart& chart, const Grid& grid,
                            const std::vector<PointResult>& pts, const Tolerances& tol);
nlohmann::json residuals_json(const ImmersionChart& chart, const Grid& grid,
                              const ResidualSummary& sum, const Tolerances& tol);
nlohmann::json classification_json(const ClassificationReport& r);
nlohmann::json catalog_json(const std::vector<CatalogCheck>& checks);

std::string analyze_csv(const std::vector<PointResult>& pts);
std::string residuals_csv(const ResidualSummary& sum, JetSource source);
std::string classification_csv(const ClassificationReport& r);
std::string catalog_csv(const std::vector<CatalogCheck>& checks);

// Pretty-printed with a trailing newline; key order is sorted, so equal
// inputs give byte-identical text.
std::string dump_json(const nlohmann::json& j);

}  // namespace confgeo
