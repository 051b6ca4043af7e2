// olglab: command-line front end for the OLG land-economy library.
//
//   olglab simulate  <config> [-o DIR]   construct a path, write CSV + manifest
//   olglab diagnose  <config> [-o DIR]   full diagnostics + improvement search
//   olglab reproduce <fig1|fig2> [-o DIR] figure panel series from the presets
//   olglab sweep     <config> [-o DIR]   one diagnosis per grid value + summary
//
// The output directory defaults to $OLGLAB_OUTDIR, then to the working
// directory.  Exit codes: 0 success, 2 construction bound violated, 3 I/O
// failure, 4 usage or malformed config.

#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "olg/config.hpp"
#include "olg/olg.hpp"
#include "olg/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConstructive = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 4;

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path resolve_outdir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OLGLAB_OUTDIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot read " + p.string());
  }
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  if (is.bad()) {
    throw std::system_error(errno, std::generic_category(),
                            "read failed: " + p.string());
  }
  return text;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot write " + p.string());
  }
  os << content;
  os.flush();
  if (!os) {
    throw std::system_error(errno, std::generic_category(),
                            "write failed: " + p.string());
  }
}

olg::ParsedConfig load_config(const fs::path& p) {
  return olg::parse_config(read_file(p));
}

std::string scenario_id_from(const fs::path& config_path) {
  std::string stem = config_path.stem().string();
  return stem.empty() ? "scenario" : stem;
}

void announce(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

int run_simulate(const fs::path& config_path, const std::string& outdir_flag) {
  Stopwatch clock;
  olg::ParsedConfig parsed = load_config(config_path);
  olg::EquilibriumPath path = olg::build_equilibrium(parsed.scenario);

  fs::path outdir = resolve_outdir(outdir_flag);
  fs::create_directories(outdir);
  std::string id = scenario_id_from(config_path);
  fs::path csv_path = outdir / (id + "_path.csv");
  write_file(csv_path, olg::to_csv(path));

  olg::RunManifest manifest;
  manifest.scenario_id = id;
  manifest.command = "simulate";
  manifest.config_echo = olg::serialize_config(
      parsed.scenario, parsed.sweep ? &*parsed.sweep : nullptr);
  manifest.outputs = {csv_path.string()};
  manifest.wall_ms = clock.ms();
  fs::path manifest_path = outdir / (id + "_manifest.json");
  write_file(manifest_path, olg::to_json(manifest));
  announce(csv_path);
  announce(manifest_path);
  return kExitOk;
}

int run_diagnose(const fs::path& config_path, const std::string& outdir_flag) {
  Stopwatch clock;
  olg::ParsedConfig parsed = load_config(config_path);
  const olg::ScenarioConfig& sc = parsed.scenario;
  olg::EquilibriumPath path = olg::build_equilibrium(sc);
  olg::DiagnosticsReport diag = olg::run_diagnostics(path);
  olg::ImprovementReport improvement =
      olg::improvement_search(path, sc.pref, sc.demo);

  fs::path outdir = resolve_outdir(outdir_flag);
  fs::create_directories(outdir);
  std::string id = scenario_id_from(config_path);
  fs::path report_path = outdir / (id + "_report.txt");
  write_file(report_path, olg::render_report(id, path, diag, &improvement));

  olg::RunManifest manifest;
  manifest.scenario_id = id;
  manifest.command = "diagnose";
  manifest.config_echo =
      olg::serialize_config(sc, parsed.sweep ? &*parsed.sweep : nullptr);
  manifest.outputs = {report_path.string()};
  manifest.wall_ms = clock.ms();
  fs::path manifest_path = outdir / (id + "_manifest.json");
  write_file(manifest_path, olg::to_json(manifest));
  announce(report_path);
  announce(manifest_path);
  return kExitOk;
}

int run_reproduce(const std::string& figure, const std::string& outdir_flag) {
  Stopwatch clock;
  std::optional<olg::ScenarioConfig> preset = olg::preset_for(figure);
  if (!preset) {
    std::cerr << "error: unknown figure id '" << figure
              << "'; valid ids: fig1, fig2\n";
    return kExitUsage;
  }
  olg::EquilibriumPath path = olg::build_equilibrium(*preset);

  fs::path outdir = resolve_outdir(outdir_flag);
  fs::create_directories(outdir);

  std::string young = "t,endowment,consumption\n";
  std::string old = "t,endowment,consumption\n";
  std::string land = "t,rent,price\n";
  std::string rate = "t,R\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::string t = olg::format_number(path.t0 + static_cast<long>(i));
    young += t + ',' + olg::format_number(path.e_y[i]) + ',' +
             olg::format_number(path.y[i]) + '\n';
    old += t + ',' + olg::format_number(preset->e_o) + ',' +
           olg::format_number(path.z[i]) + '\n';
    land += t + ',' + olg::format_number(path.r[i]) + ',' +
            olg::format_number(path.P[i]) + '\n';
    rate += t + ',' + olg::format_number(path.R[i]) + '\n';
  }

  olg::RunManifest manifest;
  manifest.scenario_id = figure;
  manifest.command = "reproduce";
  manifest.config_echo = olg::serialize_config(*preset);
  const std::pair<const char*, const std::string*> panels[] = {
      {"_young.csv", &young}, {"_old.csv", &old}, {"_land.csv", &land},
      {"_rate.csv", &rate}};
  for (const auto& [suffix, content] : panels) {
    fs::path p = outdir / (figure + suffix);
    write_file(p, *content);
    manifest.outputs.push_back(p.string());
    announce(p);
  }
  manifest.wall_ms = clock.ms();
  fs::path manifest_path = outdir / (figure + "_manifest.json");
  write_file(manifest_path, olg::to_json(manifest));
  announce(manifest_path);
  return kExitOk;
}

std::string csv_sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

int run_sweep(const fs::path& config_path, const std::string& outdir_flag) {
  Stopwatch clock;
  olg::ParsedConfig parsed = load_config(config_path);
  if (!parsed.sweep) {
    throw olg::ConfigError(0, "the sweep command needs a [sweep] section");
  }
  const olg::SweepSpec& sweep = *parsed.sweep;

  fs::path outdir = resolve_outdir(outdir_flag);
  fs::create_directories(outdir);
  std::string id = scenario_id_from(config_path);

  olg::RunManifest manifest;
  manifest.scenario_id = id;
  manifest.command = "sweep";
  manifest.config_echo = olg::serialize_config(parsed.scenario, &sweep);

  std::string summary =
      "index,param,value,status,message,t0,"
      "bubble_verdict,bubble_partial_sum,bubble_tail_ratio,"
      "cass_verdict,cass_criterion_holds,cass_partial_sum,cass_tail_ratio,"
      "pv_endowment_verdict,asymptotically_bubbly,detrended_price_tail_infimum,"
      "natural_rate,rent_growth,growth,necessity_holds,"
      "eo_bound,eo_satisfied,p_bound,p_satisfied,"
      "necessity2_bound,necessity2_satisfied,p_star,rate_meets_growth,"
      "mu,mu_degenerate\n";

  for (std::size_t k = 0; k < sweep.values.size(); ++k) {
    double value = sweep.values[k];
    std::string row = olg::format_number(static_cast<long>(k)) + ',' + sweep.param +
                      ',' + olg::format_number(value) + ',';
    try {
      olg::ScenarioConfig point = olg::with_param(parsed.scenario, sweep.param, value);
      point.validate();
      olg::EquilibriumPath path = olg::build_equilibrium(point);
      olg::DiagnosticsReport diag = olg::run_diagnostics(path);

      std::string point_id = id + "_point_" + olg::format_number(static_cast<long>(k));
      fs::path report_path = outdir / (point_id + "_report.txt");
      write_file(report_path, olg::render_report(point_id, path, diag));
      manifest.outputs.push_back(report_path.string());

      row += "ok,,";
      row += olg::format_number(path.t0);
      row += ',';
      row += olg::render_verdict(diag.bubble.verdict);
      row += ',';
      row += olg::format_number(diag.bubble.partial_sum);
      row += ',';
      row += olg::format_number(diag.bubble.tail_ratio);
      row += ',';
      row += olg::render_verdict(diag.cass.verdict);
      row += ',';
      row += olg::render_flag(olg::cass_flag(diag.cass));
      row += ',';
      row += olg::format_number(diag.cass.partial_sum);
      row += ',';
      row += olg::format_number(diag.cass.tail_ratio);
      row += ',';
      row += olg::render_verdict(diag.pv.verdict);
      row += ',';
      row += olg::render_bool(diag.asymptotically_bubbly.value);
      row += ',';
      row += olg::format_number(diag.asymptotically_bubbly.tail_infimum);
      row += ',';
      row += olg::format_number(diag.necessity.natural_rate);
      row += ',';
      row += olg::format_number(diag.necessity.rent_growth);
      row += ',';
      row += olg::format_number(diag.necessity.growth);
      row += ',';
      row += olg::render_bool(diag.necessity.holds);
      row += ',';
      row += olg::format_number(diag.bounds.eo_bound);
      row += ',';
      row += olg::render_bool(diag.bounds.eo_satisfied);
      row += ',';
      row += olg::format_number(diag.bounds.p_bound);
      row += ',';
      row += olg::render_bool(diag.bounds.p_satisfied);
      row += ',';
      row += olg::format_number(diag.bounds.necessity2_bound);
      row += ',';
      row += olg::render_bool(diag.bounds.necessity2_satisfied);
      row += ',';
      row += olg::format_number(diag.bounds.p_star);
      row += ',';
      row += olg::render_bool(diag.bounds.rate_meets_growth);
      row += ',';
      row += olg::format_number(diag.mu.mu);
      row += ',';
      row += olg::render_bool(diag.mu.degenerate);
    } catch (const std::exception& e) {
      row += "error," + csv_sanitize(e.what());
      for (int c = 0; c < 25; ++c) row += ',';  // scalar columns stay empty
    }
    summary += row + '\n';
  }

  fs::path summary_path = outdir / (id + "_sweep.csv");
  write_file(summary_path, summary);
  manifest.outputs.push_back(summary_path.string());
  manifest.wall_ms = clock.ms();
  fs::path manifest_path = outdir / (id + "_manifest.json");
  write_file(manifest_path, olg::to_json(manifest));
  announce(summary_path);
  announce(manifest_path);
  return kExitOk;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const olg::ConstructiveFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstructive;
  } catch (const olg::UnsupportedRegime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstructive;
  } catch (const olg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::system_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "olglab: overlapping-generations land economies with fundamental or "
      "bubbly price paths.\nOutput directory: -o, else $OLGLAB_OUTDIR, else "
      "the working directory."};
  app.require_subcommand(1);
  app.set_version_flag("--version", olg::kVersionString);

  std::string config_arg;
  std::string figure_arg;
  std::string outdir_arg;
  int rc = kExitOk;

  auto* simulate = app.add_subcommand(
      "simulate", "Construct the configured equilibrium and write its path CSV");
  simulate->add_option("config", config_arg, "scenario config file")->required();
  simulate->add_option("-o,--output", outdir_arg, "output directory");
  simulate->callback([&] { rc = guarded([&] { return run_simulate(config_arg, outdir_arg); }); });

  auto* diagnose = app.add_subcommand(
      "diagnose", "Run bubble/efficiency diagnostics and the improvement search");
  diagnose->add_option("config", config_arg, "scenario config file")->required();
  diagnose->add_option("-o,--output", outdir_arg, "output directory");
  diagnose->callback([&] { rc = guarded([&] { return run_diagnose(config_arg, outdir_arg); }); });

  auto* reproduce = app.add_subcommand(
      "reproduce", "Write figure panel series for a named preset (fig1 or fig2)");
  reproduce->add_option("figure", figure_arg, "figure id: fig1 or fig2")->required();
  reproduce->add_option("-o,--output", outdir_arg, "output directory");
  reproduce->callback(
      [&] { rc = guarded([&] { return run_reproduce(figure_arg, outdir_arg); }); });

  auto* sweep = app.add_subcommand(
      "sweep", "Diagnose the scenario once per value in its [sweep] section");
  sweep->add_option("config", config_arg, "scenario config file with [sweep]")->required();
  sweep->add_option("-o,--output", outdir_arg, "output directory");
  sweep->callback([&] { rc = guarded([&] { return run_sweep(config_arg, outdir_arg); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return rc;
}
