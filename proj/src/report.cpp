#include "confgeo/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "confgeo/errors.hpp"

namespace confgeo {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(number(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json vec(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& a) { return sym_eigen(SymMatrix::from_dense(a)).values; }

json residual_block(const IdentityResiduals& got, const IdentityResiduals& limit) {
  json out = json::array();
  const auto& names = IdentityResiduals::names();
  const auto v = got.values(), t = limit.values();
  for (std::size_t i = 0; i < names.size(); ++i)
    out.push_back({{"identity", names[i]},
                   {"anchor", identity_anchor(names[i])},
                   {"max", number(v[i])},
                   {"threshold", t[i]},
                   {"pass", v[i] <= t[i]}});
  return out;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      out += '"';
    } else {
      out += c;
    }
  }
  return out + "\n";
}

std::string point_cell(const std::vector<double>& u) {
  std::string s;
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? " " : "") + format_double(u[i]);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::string& identity_anchor(const std::string& name) {
  static const std::map<std::string, std::string> anchors = {
      {"trace_b", "conformal second fundamental form is trace-free"},
      {"norm_b", "|B|^2 = (m-1)/m"},
      {"trace_a", "tr A = (m^2 kappa - 1)/(2m), kappa the normalized scalar curvature"},
      {"phi_antisym", "skew part of nabla Phi equals the commutator of B and A"},
      {"blaschke_codazzi", "Codazzi-type equation for the Blaschke tensor"},
      {"b_codazzi", "Codazzi-type equation for the conformal second fundamental form"},
      {"gauss", "Gauss-type equation: curvature of g from A and B"},
      {"ricci", "Ricci tensor of g from B^2, tr A and A"},
      {"frame", "relations of the moving frame Y, N, Y_i, xi"},
      {"route_a", "closed formula for A vs -<Y_ij, N>"},
      {"route_b", "closed formula for B vs -<Y_ij, xi>"},
      {"route_phi", "closed formula for Phi vs -<xi, dN>"}};
  auto it = anchors.find(name);
  if (it == anchors.end()) throw ValidationError("unknown identity '" + name + "'");
  return it->second;
}

json tolerances_json(const Tolerances& t) {
  return {{"analytic", t.analytic},
          {"fd", t.fd},
          {"classify", t.classify},
          {"cluster_rel", t.cluster_rel},
          {"lightlike", t.lightlike},
          {"rho2_min", t.rho2_min},
          {"metric_min", t.metric_min},
          {"ambient_analytic", t.ambient_analytic},
          {"ambient_fd", t.ambient_fd},
          {"on_space_form", t.on_space_form},
          {"denominator", t.denominator},
          {"consistency_factor", t.consistency_factor}};
}

json grid_json(const Grid& g) {
  return {{"counts", g.counts}, {"lo", vec(g.box.lo)}, {"hi", vec(g.box.hi)}, {"points", g.size()}};
}

json chart_json(const ImmersionChart& c) {
  return {{"name", c.name()},
          {"m", c.dim()},
          {"ambient", {{"kind", to_string(c.ambient().kind)}, {"a", c.ambient().a}}},
          {"jet", c.jet_source() == JetSource::Analytic ? "analytic" : "fd"},
          {"domain", {{"lo", vec(c.domain().lo)}, {"hi", vec(c.domain().hi)}}}};
}

json analyze_json(const ImmersionChart& chart, const Grid& grid, const std::vector<PointResult>& pts,
                  const Tolerances& tol) {
  json points = json::array();
  std::size_t failed = 0;
  for (const auto& p : pts) {
    json e{{"u", vec(p.u)}, {"ok", p.ok}};
    if (!p.ok) {
      ++failed;
      e["error"] = p.error;
    } else {
      const ConformalData& d = p.data;
      e["x"] = vec(d.x);
      e["rho"] = number(d.rho);
      e["H"] = number(d.H);
      e["kappa"] = number(d.inv.kappa);
      e["A"] = matrix(d.inv.A);
      e["B"] = matrix(d.inv.B);
      e["Phi"] = vec(d.inv.Phi);
      e["A_eigenvalues"] = vec(eigenvalues(d.inv.A));
      e["B_eigenvalues"] = vec(eigenvalues(d.inv.B));
      e["grad_A_norm"] = number(d.der.normA());
      e["grad_B_norm"] = number(d.der.normB());
      json res = json::object();
      const auto v = d.res.values();
      for (std::size_t i = 0; i < v.size(); ++i) res[IdentityResiduals::names()[i]] = number(v[i]);
      e["residuals"] = res;
    }
    points.push_back(e);
  }
  return {{"command", "analyze"},
          {"chart", chart_json(chart)},
          {"grid", grid_json(grid)},
          {"tolerances", tolerances_json(tol)},
          {"failed_points", failed},
          {"points", points}};
}

json residuals_json(const ImmersionChart& chart, const Grid& grid, const ResidualSummary& sum,
                    const Tolerances& tol) {
  const IdentityResiduals limit = identity_thresholds(chart.jet_source());
  bool pass = sum.failed_points == 0;
  const auto v = sum.max.values(), t = limit.values();
  for (std::size_t i = 0; i < v.size(); ++i) pass = pass && v[i] <= t[i];
  return {{"command", "residuals"},
          {"chart", chart_json(chart)},
          {"grid", grid_json(grid)},
          {"tolerances", tolerances_json(tol)},
          {"identities", residual_block(sum.max, limit)},
          {"failed_points", sum.failed_points},
          {"errors", sum.errors},
          {"pass", pass}};
}

json classification_json(const ClassificationReport& r) {
  json gates = json::array();
  for (const auto& g : r.gates)
    gates.push_back({{"gate", g.name}, {"pass", g.pass}, {"value", number(g.value)},
                     {"threshold", number(g.threshold)}});
  json eigen = nullptr;
  if (r.has_eigen) {
    json blocks = json::array();
    for (const auto& b : r.eigen.blocks)
      blocks.push_back({{"lambda", number(b.lambda)},
                        {"multiplicity", b.multiplicity},
                        {"mu", vec(b.mu)},
                        {"spread", number(b.spread)},
                        {"b_zero", b.b_zero}});
    eigen = {{"t", r.eigen.t},
             {"blocks", blocks},
             {"commutator", number(r.eigen.commutator)},
             {"grid_variation", number(r.eigen.grid_variation)},
             {"block_b_spread", number(r.eigen.block_b_spread)},
             {"zero_block", r.zero_block >= 0 ? json(r.zero_block) : json(nullptr)}};
  }
  return {{"command", "classify"},
          {"chart", r.chart},
          {"branch", to_string(r.branch)},
          {"anchor", r.anchor},
          {"failed_gate", r.failed_gate.empty() ? json(nullptr) : json(r.failed_gate)},
          {"residuals",
           {{"phi_norm", number(r.phi_norm)},
            {"gradA_norm", number(r.gradA_norm)},
            {"gradB_norm", number(r.gradB_norm)},
            {"bibj_residual", number(r.bibj_residual)},
            {"sectional_residual", number(r.sectional_residual)}}},
          {"gates", gates},
          {"eigenstructure", eigen},
          {"tolerances", tolerances_json(r.tol)},
          {"grid", grid_json(r.grid)},
          {"errors", r.errors},
          {"notes", r.notes}};
}

json catalog_json(const std::vector<CatalogCheck>& checks) {
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back({{"family", c.family},
                    {"m", c.m},
                    {"chart", c.chart},
                    {"built", c.built},
                    {"regular", c.regular},
                    {"identities", c.built ? residual_block(c.residuals, c.thresholds) : json::array()},
                    {"residuals_ok", c.residuals_ok},
                    {"phi_max", number(c.phi_max)},
                    {"expected_branch", to_string(c.expected)},
                    {"branch", c.built ? json(to_string(c.got)) : json(nullptr)},
                    {"failed_gate", c.failed_gate.empty() ? json(nullptr) : json(c.failed_gate)},
                    {"error", c.error.empty() ? json(nullptr) : json(c.error)},
                    {"pass", c.pass}});
  }
  return {{"command", "verify-catalog"}, {"entries", rows}, {"pass", all}};
}

std::string analyze_csv(const std::vector<PointResult>& pts) {
  std::vector<std::string> head{"u", "ok", "rho", "H", "kappa", "A_eigenvalues", "B_eigenvalues",
                                "phi_norm", "grad_A_norm", "grad_B_norm"};
  for (const auto& n : IdentityResiduals::names()) head.push_back(n);
  head.push_back("error");
  std::string out = join_csv(head);
  for (const auto& p : pts) {
    std::vector<std::string> row{point_cell(p.u), p.ok ? "1" : "0"};
    if (p.ok) {
      const ConformalData& d = p.data;
      const Eigen::VectorXd a = eigenvalues(d.inv.A), b = eigenvalues(d.inv.B);
      row.push_back(format_double(d.rho));
      row.push_back(format_double(d.H));
      row.push_back(format_double(d.inv.kappa));
      row.push_back(point_cell(std::vector<double>(a.data(), a.data() + a.size())));
      row.push_back(point_cell(std::vector<double>(b.data(), b.data() + b.size())));
      row.push_back(format_double(d.inv.Phi.norm()));
      row.push_back(format_double(d.der.normA()));
      row.push_back(format_double(d.der.normB()));
      for (double v : d.res.values()) row.push_back(format_double(v));
      row.push_back("");
    } else {
      for (std::size_t i = 2; i + 1 < head.size(); ++i) row.push_back("");
      row.push_back(p.error);
    }
    out += join_csv(row);
  }
  return out;
}

std::string residuals_csv(const ResidualSummary& sum, JetSource source) {
  const IdentityResiduals limit = identity_thresholds(source);
  std::string out = join_csv({"identity", "max", "threshold", "pass", "anchor"});
  const auto& names = IdentityResiduals::names();
  const auto v = sum.max.values(), t = limit.values();
  for (std::size_t i = 0; i < names.size(); ++i)
    out += join_csv({names[i], format_double(v[i]), format_double(t[i]), v[i] <= t[i] ? "1" : "0",
                     identity_anchor(names[i])});
  return out;
}

std::string classification_csv(const ClassificationReport& r) {
  std::string out = join_csv({"chart", "branch", "failed_gate", "phi_norm", "gradA_norm",
                              "gradB_norm", "bibj_residual", "sectional_residual", "t"});
  out += join_csv({r.chart, to_string(r.branch), r.failed_gate, format_double(r.phi_norm),
                   format_double(r.gradA_norm), format_double(r.gradB_norm),
                   format_double(r.bibj_residual), format_double(r.sectional_residual),
                   r.has_eigen ? std::to_string(r.eigen.t) : ""});
  return out;
}

std::string catalog_csv(const std::vector<CatalogCheck>& checks) {
  std::vector<std::string> head{"family", "m", "built", "regular", "residuals_ok", "phi_max",
                                "expected_branch", "branch", "pass", "error"};
  std::string out = join_csv(head);
  for (const auto& c : checks)
    out += join_csv({c.family, std::to_string(c.m), c.built ? "1" : "0", c.regular ? "1" : "0",
                     c.residuals_ok ? "1" : "0", format_double(c.phi_max), to_string(c.expected),
                     c.built ? to_string(c.got) : "", c.pass ? "1" : "0", c.error});
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace confgeo
