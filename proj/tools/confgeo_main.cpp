// confgeo: conformal invariants of space-like hypersurfaces in de Sitter space.
//
// Exit codes: 0 success, 1 bad input (including usage errors), 2 computation
// failed. A report is written whenever a computation was started.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confgeo/atlas.hpp"
#include "confgeo/catalog.hpp"
#include "confgeo/classifier.hpp"
#include "confgeo/errors.hpp"
#include "confgeo/report.hpp"
#include "confgeo/suite.hpp"

using namespace confgeo;

namespace {

struct ChartArgs {
  std::string catalog;
  std::string chart_file;
  int m = 0;
  Params params;
  std::string lift = "default";
  std::string jet = "analytic";
  int fd_order = 4;
  double fd_step = 0.0;
  int grid = 3;
  std::string write_chart;
};

struct OutputArgs {
  std::string out;
  std::string format = "json";
};

struct TolArgs {
  Tolerances tol;
};

void add_chart_options(CLI::App* sub, ChartArgs& c) {
  auto* cat = sub->add_option("--catalog", c.catalog, "catalog family or template name");
  auto* file = sub->add_option("--chart", c.chart_file, "chart definition file (JSON)");
  cat->excludes(file);
  sub->add_option("--m", c.m, "hypersurface dimension (with --catalog)")->check(CLI::PositiveNumber);
  for (const char* key : {"k", "a", "p", "q", "K", "split", "r", "scale", "s"}) {
    const std::string k = key;
    sub->add_option_function<double>(
        "--" + k, [&c, k](const double& v) { c.params[k] = v; }, "family parameter " + k);
  }
  sub->add_option("--lift", c.lift, "map into de Sitter space: default, none or a map name");
  sub->add_option("--jet", c.jet, "jet source")->check(CLI::IsMember({"analytic", "fd"}));
  sub->add_option("--fd-order", c.fd_order, "accuracy order of FD stencils");
  sub->add_option("--fd-step", c.fd_step, "fixed FD step (0 = automatic)");
  sub->add_option("--grid", c.grid, "grid points per axis")->check(CLI::Range(3, 64));
  sub->add_option("--write-chart", c.write_chart, "also write the chart definition file");
}

void add_output_options(CLI::App* sub, OutputArgs& o) {
  sub->add_option("--out", o.out, "report path (default: stdout)");
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

void add_tolerance_options(CLI::App* sub, TolArgs& t) {
  sub->add_option("--tol-analytic", t.tol.analytic)->check(CLI::PositiveNumber);
  sub->add_option("--tol-fd", t.tol.fd)->check(CLI::PositiveNumber);
  sub->add_option("--tol-classify", t.tol.classify)->check(CLI::PositiveNumber);
  sub->add_option("--rho2-min", t.tol.rho2_min)->check(CLI::PositiveNumber);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << text;
}

ChartSpec resolve_spec(const ChartArgs& c) {
  ChartSpec spec;
  if (!c.chart_file.empty()) {
    std::ifstream f(c.chart_file);
    if (!f) throw ValidationError("cannot read chart file '" + c.chart_file + "'");
    nlohmann::json doc;
    try {
      f >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("chart file is not valid JSON: ") + e.what());
    }
    spec = spec_from_json(doc);
    for (const auto& [k, v] : c.params) {
      if (!spec.params.count(k)) throw ValidationError(spec.name + ": unknown parameter '" + k + "'");
      spec.params[k] = v;
    }
  } else {
    if (c.catalog.empty()) throw ValidationError("one of --catalog or --chart is required");
    if (c.m <= 0) throw ValidationError("--m is required with --catalog");
    spec = default_spec(c.catalog, c.m, c.params);
  }
  if (c.lift == "none")
    spec.lift.clear();
  else if (c.lift != "default")
    spec.lift = c.lift;
  if (c.jet == "fd") {
    spec.jet = JetSource::FiniteDifference;
    spec.fd.order = c.fd_order;
    spec.fd.step = c.fd_step;
  }
  validate_spec(spec);
  if (!c.write_chart.empty()) write_text(c.write_chart, dump_json(spec_to_json(spec)));
  return spec;
}

nlohmann::json error_report(const std::string& command, const std::string& kind,
                            const std::string& what) {
  return {{"command", command}, {"error", {{"kind", kind}, {"message", what}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal invariants of space-like hypersurfaces in de Sitter space"};
  app.require_subcommand(1);

  ChartArgs chart_args;
  OutputArgs out_args;
  TolArgs tol_args;

  auto* analyze = app.add_subcommand("analyze", "invariants at every grid point");
  auto* classify_cmd = app.add_subcommand("classify", "parallel Blaschke tensor classification");
  auto* residuals = app.add_subcommand("residuals", "structural identity residual suite");
  for (auto* sub : {analyze, classify_cmd, residuals}) {
    add_chart_options(sub, chart_args);
    add_output_options(sub, out_args);
    add_tolerance_options(sub, tol_args);
  }

  auto* verify = app.add_subcommand("verify-catalog", "check every catalog family");
  std::vector<int> verify_ms{3, 4};
  int verify_grid = 3;
  verify->add_option("--m", verify_ms, "dimensions to check")->check(CLI::Range(3, 6));
  verify->add_option("--grid", verify_grid, "grid points per axis")->check(CLI::Range(3, 64));
  add_output_options(verify, out_args);
  add_tolerance_options(verify, tol_args);

  auto* map_cmd = app.add_subcommand("map", "apply a conformal map to a point");
  std::string which;
  std::vector<double> point;
  map_cmd->add_option("--which", which, "map name")->required();
  map_cmd->add_option("--point", point, "coordinates, space or comma separated")
      ->required()
      ->delimiter(',')
      ->allow_extra_args();
  add_output_options(map_cmd, out_args);
  add_tolerance_options(map_cmd, tol_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string command = app.get_subcommands().front()->get_name();
  bool started = false;
  try {
    const Tolerances& tol = tol_args.tol;
    const bool csv = out_args.format == "csv";
    if (command == "map") {
      const MapKind k = map_from_name(which);
      started = true;
      const std::vector<double> image = apply_named_map(k, point, tol);
      if (csv) {
        std::string line = "map,input,output\n" + which + ",";
        for (std::size_t i = 0; i < point.size(); ++i) line += (i ? " " : "") + format_double(point[i]);
        line += ",";
        for (std::size_t i = 0; i < image.size(); ++i) line += (i ? " " : "") + format_double(image[i]);
        write_text(out_args.out, line + "\n");
      } else {
        write_text(out_args.out, dump_json({{"command", "map"},
                                            {"map", which},
                                            {"input", point},
                                            {"output", image}}));
      }
      return 0;
    }
    if (command == "verify-catalog") {
      started = true;
      const auto checks = verify_catalog(verify_ms, verify_grid, tol);
      write_text(out_args.out, csv ? catalog_csv(checks) : dump_json(catalog_json(checks)));
      for (const auto& c : checks)
        if (!c.pass) return 2;
      return 0;
    }

    const ChartSpec spec = resolve_spec(chart_args);
    started = true;
    const ImmersionChart chart = build_chart(spec);
    const Grid grid = default_grid(chart, chart_args.grid);
    if (command == "analyze") {
      const auto pts = analyze_grid(chart, grid, tol);
      write_text(out_args.out, csv ? analyze_csv(pts) : dump_json(analyze_json(chart, grid, pts, tol)));
      for (const auto& p : pts)
        if (!p.ok) return 2;
      return 0;
    }
    if (command == "residuals") {
      const ResidualSummary sum = identity_residuals(chart, grid, tol);
      write_text(out_args.out, csv ? residuals_csv(sum, chart.jet_source())
                                   : dump_json(residuals_json(chart, grid, sum, tol)));
      return sum.failed_points > 0 ? 2 : 0;
    }
    const ClassificationReport rep = classify(chart, grid, tol);
    write_text(out_args.out, csv ? classification_csv(rep) : dump_json(classification_json(rep)));
    return rep.errors.empty() ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (started && !out_args.out.empty())
      write_text(out_args.out, dump_json(error_report(command, "input", e.what())));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (started) {
      try {
        write_text(out_args.out, dump_json(error_report(command, "computation", e.what())));
      } catch (const std::exception&) {
      }
    }
    return 2;
  }
}
