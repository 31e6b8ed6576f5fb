#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rsfield/io.hpp"
#include "rsfield/ou.hpp"
#include "rsfield/parallel.hpp"
#include "rsfield/stats.hpp"
#include "rsfield/triangle.hpp"
#include "rsfield/verify.hpp"

namespace fs = std::filesystem;
using namespace rsfield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct FlagSet {
  std::vector<std::pair<std::string, std::string>> entries;
};

// Flags are collected as key/value strings and applied on top of the config
// file, so flags always win.
void add_common_options(CLI::App* cmd, std::string& config_path, FlagSet& flags) {
  cmd->add_option("--config", config_path, "flat key=value config file");
  static const std::vector<std::string> keys = {
      "n",          "theta",      "hurst",   "grid_lo", "grid_hi", "cells",
      "replications", "seed",     "truncation", "refinements", "tolerance", "alpha",
      "jobs",       "out",        "driver",  "pipeline", "suite",  "kind",
      "apex",       "subset",     "f",       "g"};
  for (const auto& key : keys) {
    cmd->add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags.entries.emplace_back(key, v); },
        "config key '" + key + "'");
  }
}

RunConfig build_config(const std::string& config_path, const FlagSet& flags) {
  RunConfig cfg;
  if (const char* env = std::getenv("RSFIELD_OUT")) cfg.out_dir = env;
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  for (const auto& [k, v] : flags.entries) apply_config_entry(cfg, k, v);
  cfg.validate();
  if (cfg.jobs > 0) set_default_jobs(cfg.jobs);
  return cfg;
}

Box config_box(const RunConfig& cfg) {
  Point lo = cfg.grid_lo.empty() ? Point(cfg.n, 0.0) : cfg.grid_lo;
  Point hi = cfg.grid_hi.empty() ? Point(cfg.n, 1.0) : cfg.grid_hi;
  if (int(lo.size()) != cfg.n || int(hi.size()) != cfg.n)
    throw std::invalid_argument("grid_lo/grid_hi must have n entries");
  return {lo, hi};
}

void emit_result(const RunConfig& cfg, const std::string& name, const nlohmann::json& payload) {
  std::cout << payload.dump(2) << "\n";
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    atomic_write((fs::path(cfg.out_dir) / (name + ".json")).string(), payload.dump(2) + "\n");
  }
}

int cmd_integrate(const RunConfig& cfg) {
  const int n = cfg.n;
  SmoothFn f = builtin_smooth(cfg.f_name, n, cfg.theta);
  SmoothFn g = builtin_smooth(cfg.g_name, n, cfg.theta);
  const Box box = config_box(cfg);

  if (cfg.kind == "box") {
    IntegralResult r = rs_integral(g.value, f.value, box, TagPolicy::midpoint(), cfg.refinements,
                                   cfg.cells);
    nlohmann::json j = to_json(r);
    j["kind"] = "box";
    j["bracket"] = rect_increment(f.value, box.lo, box.hi);
    emit_result(cfg, "integral_box", j);
    return kExitOk;
  }
  if (cfg.kind == "mixed") {
    if (cfg.subset.empty())
      throw std::invalid_argument("mixed: pass the coordinate subset via --subset \"1,2\"");
    IntegralResult r = mixed_integral(g.value, f.value, MultiIndexSet::of(cfg.subset, n), box,
                                      TagPolicy::midpoint(), cfg.refinements, cfg.cells);
    nlohmann::json j = to_json(r);
    j["kind"] = "mixed";
    emit_result(cfg, "integral_mixed", j);
    return kExitOk;
  }
  if (cfg.kind == "triangle" || cfg.kind == "complement" || cfg.kind == "additivity") {
    Point apex = cfg.apex.empty() ? Point(n, 1.0) : cfg.apex;
    if (int(apex.size()) != n) throw std::invalid_argument("apex must have n entries");
    if (cfg.kind == "triangle") {
      IntegralResult r = triangle_integral(f, g.value, apex, cfg.refinements, cfg.cells);
      nlohmann::json j = to_json(r);
      j["kind"] = "triangle";
      emit_result(cfg, "integral_triangle", j);
      return kExitOk;
    }
    if (cfg.kind == "complement") {
      IntegralResult r = complement_integral(f, g.value, apex, cfg.refinements, cfg.cells);
      nlohmann::json j = to_json(r);
      j["kind"] = "complement";
      emit_result(cfg, "integral_complement", j);
      return kExitOk;
    }
    IntegralResult tri = triangle_integral(f, g.value, apex, cfg.refinements, cfg.cells);
    IntegralResult comp = complement_integral(f, g.value, apex, cfg.refinements, cfg.cells);
    TriangleDomain dom = build_domain(apex);
    double whole_value = 0.0, whole_err = 0.0;
    if (dom.apex_sum() != 0.0) {
      Box R{dom.reflected, apex};
      if (dom.orientation < 0) std::swap(R.lo, R.hi);
      IntegralResult whole =
          rs_integral(f.value, g.value, R, TagPolicy::midpoint(), cfg.refinements, cfg.cells);
      whole_value = whole.value;
      whole_err = whole.error_estimate;
    }
    const double gap = std::abs(whole_value - tri.value - comp.value);
    const double budget =
        std::max(1e-6, 10.0 * (whole_err + tri.error_estimate + comp.error_estimate));
    nlohmann::json j;
    j["kind"] = "additivity";
    j["triangle"] = to_json(tri);
    j["complement"] = to_json(comp);
    j["box"] = whole_value;
    j["gap"] = gap;
    j["budget"] = budget;
    emit_result(cfg, "integral_additivity", j);
    return gap <= budget ? kExitOk : kExitFailure;
  }
  throw std::invalid_argument("unknown integrate kind '" + cfg.kind + "'");
}

int cmd_simulate(const RunConfig& cfg) {
  const int n = cfg.n;
  ThetaVector theta(int(cfg.theta.size()) == n ? cfg.theta : std::vector<double>(n, 1.0));
  const double trunc = cfg.truncation > 0.0 ? cfg.truncation : 5.0;

  Point lo = cfg.grid_lo.empty() ? Point(n, -trunc) : cfg.grid_lo;
  Point hi = cfg.grid_hi.empty() ? Point(n, 1.5) : cfg.grid_hi;
  GridPartition P = GridPartition::uniform(lo, hi, cfg.cells);

  FieldEnsemble driver = [&]() {
    if (cfg.driver == "bsheet") return brownian_sheet(P, cfg.replications, cfg.seed);
    if (cfg.driver == "fbm") {
      if (int(cfg.hurst.size()) != n) throw std::invalid_argument("fbm driver needs --hurst");
      return fbm_sheet(HurstVector(cfg.hurst), P, cfg.replications, cfg.seed);
    }
    throw std::invalid_argument("unknown driver '" + cfg.driver + "'");
  }();

  const std::string out = cfg.out_dir.empty() ? "ensemble_out" : cfg.out_dir;
  if (cfg.pipeline == "none") {
    save_ensemble(out, driver);
  } else if (cfg.pipeline == "ou") {
    save_ensemble(out, ou_solve_ensemble(driver, theta, trunc));
  } else if (cfg.pipeline == "ou-lamperti") {
    save_ensemble(out, lamperti_ensemble(ou_solve_ensemble(driver, theta, trunc), theta));
  } else {
    throw std::invalid_argument("unknown pipeline '" + cfg.pipeline + "'");
  }
  std::cout << "ensemble written to " << out << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, const std::string& in_dir) {
  const std::string dir = in_dir.empty() ? cfg.out_dir : in_dir;
  if (dir.empty()) throw std::invalid_argument("report: pass --in or set out dir");
  bool printed = false;
  if (fs::exists(fs::path(dir) / "manifest.json")) {
    FieldEnsemble E = load_ensemble(dir);
    std::cout << "ensemble: driver=" << E.driver << " params=" << E.params
              << " replications=" << E.size() << " seed=" << E.seed << "\n";
    std::cout << "grid:";
    for (int m = 0; m < E.partition.dim(); ++m)
      std::cout << " axis" << m + 1 << "=[" << E.partition.axis(m).front() << ","
                << E.partition.axis(m).back() << "]x" << E.partition.cells(m);
    std::cout << "\n";
    if (E.size() >= 30) {
      const Point upper = E.partition.upper();
      auto [c, se] = empirical_cov(E, upper, upper);
      std::cout << "variance at upper corner: " << c << " (se " << se << ")\n";
    }
    printed = true;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json" || entry.path().filename() == "manifest.json")
      continue;
    std::ifstream in(entry.path());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) continue;
    if (j.contains("statistics")) {
      TestReport r;
      r.name = j.value("name", entry.path().stem().string());
      r.alpha = j.value("alpha", 0.01);
      r.pass = j.value("pass", false);
      for (const auto& s : j["statistics"])
        r.statistics.push_back({s.value("probe", ""), s.value("observed", 0.0),
                                s.value("expected", 0.0), s.value("se", 0.0), s.value("z", 0.0)});
      std::cout << report_table(r);
      printed = true;
    } else if (j.contains("value") && j.contains("levels")) {
      std::cout << entry.path().filename().string() << ": value=" << j["value"]
                << " error_estimate=" << j["error_estimate"] << "\n";
      printed = true;
    }
  }
  if (!printed) std::cout << "nothing to report in " << dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-parameter Riemann-Stieltjes calculus and Ornstein-Uhlenbeck fields"};
  app.require_subcommand(1);

  std::string config_integrate, config_simulate, config_verify, config_report;
  FlagSet flags_integrate, flags_simulate, flags_verify, flags_report;
  std::string report_in;

  CLI::App* integrate = app.add_subcommand("integrate", "run a named integral");
  add_common_options(integrate, config_integrate, flags_integrate);

  CLI::App* simulate = app.add_subcommand("simulate", "generate and transform ensembles");
  add_common_options(simulate, config_simulate, flags_simulate);

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common_options(verify, config_verify, flags_verify);

  CLI::App* report = app.add_subcommand("report", "summarize saved outputs");
  add_common_options(report, config_report, flags_report);
  report->add_option("--in", report_in, "directory to summarize");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (integrate->parsed()) return cmd_integrate(build_config(config_integrate, flags_integrate));
    if (simulate->parsed()) return cmd_simulate(build_config(config_simulate, flags_simulate));
    if (verify->parsed()) {
      RunConfig cfg = build_config(config_verify, flags_verify);
      return run_suite(cfg, std::cout) == 0 ? kExitOk : kExitFailure;
    }
    if (report->parsed()) return cmd_report(build_config(config_report, flags_report), report_in);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
