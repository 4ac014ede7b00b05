// infomap: batch command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O or
// format error. Payloads go to stdout or files; stderr carries only
// diagnostics, so a successful run never writes to it.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "infomap/infomap.hpp"

namespace fs = std::filesystem;
using namespace infomap;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::FormatError:
      return kIo;
    default:
      return kValidation;
  }
}

std::pair<int, int> parse_pair(const std::string& text, const char* flag) {
  const auto parts = detail::split(text, ',');
  const auto a = parts.size() == 2 ? detail::parse_int<int>(parts[0]) : std::nullopt;
  const auto b = parts.size() == 2 ? detail::parse_int<int>(parts[1]) : std::nullopt;
  if (!a || !b) throw UsageError(std::string(flag) + " expects two integers 'a,b'");
  return {*a, *b};
}

ValueRange parse_range(const std::string& text) {
  const auto parts = detail::split(text, ',');
  const auto a = parts.size() == 2 ? detail::parse_double(parts[0]) : std::nullopt;
  const auto b = parts.size() == 2 ? detail::parse_double(parts[1]) : std::nullopt;
  if (!a || !b) throw UsageError("--range expects 'vmin,vmax'");
  return {*a, *b};
}

OobPolicy parse_oob(const std::string& text) {
  if (text == "default") return OobPolicy::DefaultValue;
  if (text == "nearest") return OobPolicy::NearestCell;
  if (text == "error") return OobPolicy::Error;
  throw UsageError("--oob expects default, nearest or error");
}

struct GridArgs {
  std::string grid;
  double res = 1.0;
  double bearing_res = 0.0;
  std::string origin = "0,0";
  std::string frame = "cartesian";

  void add_to(CLI::App* cmd, bool required) {
    auto* g = cmd->add_option("--grid", grid, "rows,cols");
    if (required) g->required();
    cmd->add_option("--res", res, "cell size in meters (range bin size for polar grids)");
    cmd->add_option("--bearing-res", bearing_res, "bearing bin size in radians (polar; default 2pi/cols)");
    cmd->add_option("--origin", origin, "origin cell row,col (cartesian)");
    cmd->add_option("--frame", frame, "cartesian|polar")->check(CLI::IsMember({"cartesian", "polar"}));
  }

  GridSpec spec() const {
    const auto [rows, cols] = parse_pair(grid, "--grid");
    if (frame == "polar") {
      const double b = bearing_res > 0.0 ? bearing_res : 2.0 * std::acos(-1.0) / cols;
      return GridSpec::polar(rows, cols, res, b);
    }
    const auto [orow, ocol] = parse_pair(origin, "--origin");
    return GridSpec::cartesian(rows, cols, res, orow, ocol);
  }
};

// Relative config paths that do not exist here are looked up under
// $INFOMAP_CONFIG_DIR.
fs::path config_path(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("INFOMAP_CONFIG_DIR"); dir && *dir) {
    const fs::path alt = fs::path(dir) / path;
    if (fs::exists(alt)) return alt;
  }
  return path;
}

bool is_image_path(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".PGM";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information maps: build, convert, query, compose and simulate"};
  app.require_subcommand(1);

  // build-pd / build-clutter
  std::string log_path, out_path;
  double match_radius = 1.0;
  std::int64_t min_opp = kDefaultMinOpportunities;
  GridArgs grid_args;
  auto* build_pd = app.add_subcommand("build-pd", "estimate a detection-probability map from a detection log");
  auto* build_clutter = app.add_subcommand("build-clutter", "estimate a per-cell clutter-rate map from a detection log");
  for (auto* cmd : {build_pd, build_clutter}) {
    cmd->add_option("--log", log_path, "detection log")->required();
    cmd->add_option("--out", out_path, "output map (native format)")->required();
    cmd->add_option("--match-radius", match_radius, "detection-to-truth association radius in meters");
    grid_args.add_to(cmd, true);
  }
  build_pd->add_option("--min-opportunities", min_opp, "cells with fewer truth visits stay unknown");

  // convert
  std::string in_path, range_text, oob_text = "default";
  auto* convert = app.add_subcommand("convert", "convert between the native format and 8-bit PGM images");
  convert->add_option("--in", in_path, "input (.pgm or native)")->required();
  convert->add_option("--out", out_path, "output (.pgm or native)")->required();
  convert->add_option("--range", range_text, "vmin,vmax of the imported map");
  convert->add_option("--oob", oob_text, "default|nearest|error");
  grid_args.add_to(convert, false);

  // query
  std::string config_text, node;
  double qx = 0.0, qy = 0.0;
  auto* query = app.add_subcommand("query", "query a hierarchy node at a world position");
  query->add_option("--config", config_text, "hierarchy config")->required();
  query->add_option("--node", node, "node name")->required();
  query->add_option("--x", qx, "x in meters")->required();
  query->add_option("--y", qy, "y in meters")->required();

  // validate-priors
  std::string manifest;
  auto* validate = app.add_subcommand("validate-priors", "check that class priors sum to one in every cell");
  validate->add_option("--manifest", manifest, "lines of '<class> <map path>'")->required();

  // bake
  auto* bake = app.add_subcommand("bake", "sample a hierarchy node into a static map");
  bake->add_option("--config", config_text, "hierarchy config")->required();
  bake->add_option("--node", node, "node name")->required();
  bake->add_option("--out", out_path, "output map (native format)")->required();
  bake->add_option("--range", range_text, "vmin,vmax of the baked map");
  bake->add_option("--oob", oob_text, "default|nearest|error");
  grid_args.add_to(bake, true);

  // sim / generate
  std::string scenario_path, persistence = "both", format = "text";
  std::optional<std::uint64_t> seed;
  auto* sim = app.add_subcommand("sim", "run the occlusion tracking experiment on a scenario");
  auto* generate = app.add_subcommand("generate", "write the simulated detection log of a scenario");
  for (auto* cmd : {sim, generate}) {
    cmd->add_option("--scenario", scenario_path, "scenario config (default: built-in occlusion scenario)");
    cmd->add_option("--seed", seed, "override the scenario seed");
  }
  sim->add_option("--persistence-map", persistence, "on|off|both")->check(CLI::IsMember({"on", "off", "both"}));
  sim->add_option("--format", format, "text|csv")->check(CLI::IsMember({"text", "csv"}));
  sim->add_option("--out", out_path, "write the report here instead of stdout");
  generate->add_option("--out", out_path, "detection log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (build_pd->parsed() || build_clutter->parsed()) {
      const GridSpec spec = grid_args.spec();
      const DetectionLog log = load_detection_log(log_path);
      const InformationMap map = build_pd->parsed() ? estimate_pd(accumulate(log, spec, match_radius), min_opp)
                                                    : estimate_clutter(log, spec, match_radius);
      save_native_file(map, out_path);
    } else if (convert->parsed()) {
      const fs::path in(in_path), out(out_path);
      if (is_image_path(in) == is_image_path(out)) throw UsageError("convert needs exactly one .pgm side");
      if (is_image_path(out)) {
        write_pgm_file(export_image(load_native_file(in)), out);
      } else {
        if (range_text.empty()) throw UsageError("importing an image needs --range vmin,vmax");
        const ValueRange range = parse_range(range_text);
        const ExportedImage img = read_pgm_file(in);
        GridSpec spec;
        if (grid_args.grid.empty()) {
          GridArgs g = grid_args;
          g.grid = std::to_string(img.raster.rows) + "," + std::to_string(img.raster.cols);
          spec = g.spec();
        } else {
          spec = grid_args.spec();
        }
        save_native_file(import_image(img.raster, spec, range.min, range.max, parse_oob(oob_text), std::nullopt,
                                      img.unknown_pixel),
                         out);
      }
    } else if (query->parsed()) {
      const Hierarchy h = load_hierarchy_config(config_path(config_text));
      const double v = h.request(h.id(node), {qx, qy});
      std::cout << (is_unknown(v) ? std::string("unknown") : detail::format_double(v)) << "\n";
    } else if (validate->parsed()) {
      const auto violations = context::validate_priors(context::load_prior_manifest(config_path(manifest)));
      for (const auto& v : violations)
        std::cout << "cell " << v.cell.row << " " << v.cell.col << " sum " << detail::format_double(v.sum) << "\n";
      if (!violations.empty()) {
        std::cerr << violations.size() << " cell(s) violate the sum-to-one constraint\n";
        return kValidation;
      }
    } else if (bake->parsed()) {
      const GridSpec spec = grid_args.spec();
      BakeOptions opts;
      opts.oob = parse_oob(oob_text);
      if (!range_text.empty()) opts.range = parse_range(range_text);
      const Hierarchy h = load_hierarchy_config(config_path(config_text));
      save_native_file(h.bake(node, spec, opts), out_path);
    } else if (sim->parsed() || generate->parsed()) {
      sim::ScenarioConfig config = scenario_path.empty() ? sim::ScenarioConfig::occlusion_default()
                                                         : sim::load_scenario(config_path(scenario_path));
      if (seed) config.seed = *seed;
      if (generate->parsed()) {
        save_detection_log(sim::generate(config), out_path);
        return kOk;
      }
      std::string report;
      for (const bool with : {true, false}) {
        if ((with && persistence == "off") || (!with && persistence == "on")) continue;
        const auto run = sim::run_occlusion_experiment(config, with);
        report += format == "csv" ? sim::run_report_csv(run) : sim::run_report_text(run);
      }
      if (out_path.empty()) std::cout << report;
      else detail::write_file(out_path, report);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
