#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "confgeo/catalog.hpp"
#include "confgeo/report.hpp"

using namespace confgeo;

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 1e-300, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("classification reports are deterministic") {
  const ImmersionChart c = build_chart(default_spec("wp", 4));
  const Grid g = default_grid(c, 3);
  const std::string a = dump_json(classification_json(classify(c, g)));
  const std::string b = dump_json(classification_json(classify(c, g)));
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j.at("branch") == "ParallelB");
  for (const char* key : {"chart", "anchor", "residuals", "eigenstructure", "tolerances", "grid"})
    CHECK(j.contains(key));
}

TEST_CASE("residual CSV lists every identity with its threshold") {
  const ImmersionChart c = build_chart(default_spec("sxh", 3));
  const ResidualSummary s = identity_residuals(c, default_grid(c, 3));
  std::istringstream in(residuals_csv(s, c.jet_source()));
  std::string line;
  std::getline(in, line);
  CHECK(line == "identity,max,threshold,pass,anchor");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",1,") != std::string::npos);
  }
  CHECK(rows == IdentityResiduals::names().size());
  for (const auto& n : IdentityResiduals::names()) CHECK_FALSE(identity_anchor(n).empty());
}

TEST_CASE("residual JSON carries thresholds and pass flags") {
  const ImmersionChart c = build_chart(default_spec("hxh", 3));
  const Grid g = default_grid(c, 3);
  const auto j = residuals_json(c, g, identity_residuals(c, g), {});
  REQUIRE(j.contains("identities"));
  for (const auto& row : j.at("identities")) CHECK(row.at("pass") == true);
}
