// Command-line front end: scans, mode counts and the self-check.
//
// Exit codes: 0 success, 1 other failure, 2 configuration or usage error,
// 3 numerical invariant failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "msq/bench_io.hpp"
#include "msq/selfcheck.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kInvariantFailure = 3;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::string> engine;
  std::uint64_t seed = 20240101;
  int trials = 50;
  bool plot_script = false;
  bool simulate = false;
};

msq::ExperimentConfig load(const Options& o) {
  msq::ExperimentConfig c = o.config_path.empty() ? msq::default_config() : msq::load_config(o.config_path);
  if (o.engine) c.engine = *o.engine == "dense" ? msq::Engine::dense : msq::Engine::implicit;
  return c;
}

void write(const Options& o, const std::string& data) {
  if (o.out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw msq::Error("cannot write '" + o.out_path + "'");
  f << data;
}

int run_scan(const Options& o, msq::ScanType type) {
  msq::ExperimentConfig c = load(o);
  c.scan = msq::scan_for(c, type);
  const msq::ScanResult r = msq::run_scan(c);
  write(o, o.format == "json" ? msq::scan_json(r, c) : msq::scan_csv(r, c));
  if (o.plot_script) {
    if (o.out_path.empty() || o.format != "csv") throw CLI::ValidationError("--plot-script needs --out and CSV output");
    std::ofstream f(o.out_path + ".py", std::ios::binary);
    f << msq::plot_script(o.out_path, r);
  }
  return 0;
}

int run_mode_count(const Options& o) {
  const msq::ExperimentConfig c = load(o);
  write(o, msq::mode_count_json(msq::mode_count_report(c, o.simulate), c));
  return 0;
}

int run_selfcheck(const Options& o) {
  const msq::ExperimentConfig c = load(o);
  const msq::SelfcheckReport r = msq::run_selfcheck(o.seed, o.trials, c.tolerances);
  std::cerr << "selfcheck: " << r.trials << " pipelines, seed " << o.seed << "\n"
            << "  max |dense - implicit|   " << r.max_engine_difference << "\n"
            << "  min uncertainty eigen    " << r.min_uncertainty << "\n"
            << "  max symplectic defect    " << r.max_symplectic_defect << "\n"
            << "  max vacuum deviation     " << r.max_vacuum_deviation << "\n";
  for (const auto& f : r.failures) std::cerr << "  FAIL " << f << "\n";
  std::cerr << (r.passed() ? "selfcheck passed\n" : "selfcheck FAILED\n");
  return r.passed() ? 0 : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimode spatial squeezing simulator"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config_path, "experiment configuration file")->check(CLI::ExistingFile);
    s->add_option("--out", o.out_path, "output file (standard output when omitted)");
    s->add_option("--engine", o.engine, "override the configured engine")->check(CLI::IsMember({"dense", "implicit"}));
    s->add_option("--seed", o.seed, "seed for randomized checks");
  };
  auto scan_cmd = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    s->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_flag("--plot-script", o.plot_script, "also write <out>.py plotting the CSV");
    return s;
  };
  CLI::App* phase = scan_cmd("phase-scan", "noise against detection phase");
  CLI::App* position = scan_cmd("position-scan", "optimal-phase squeezing against BLO position");
  CLI::App* width = scan_cmd("width-scan", "optimal-phase squeezing against BLO width");
  CLI::App* modes = app.add_subcommand("mode-count", "coherence length and mode counts as JSON");
  common(modes);
  modes->add_flag("--simulate", o.simulate, "also extract the count from simulated scans");
  CLI::App* self = app.add_subcommand("selfcheck", "cross-engine and invariant checks");
  common(self);
  self->add_option("--trials", o.trials, "random pipelines")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (phase->parsed()) return run_scan(o, msq::ScanType::phase);
    if (position->parsed()) return run_scan(o, msq::ScanType::position);
    if (width->parsed()) return run_scan(o, msq::ScanType::width);
    if (modes->parsed()) return run_mode_count(o);
    return run_selfcheck(o);
  } catch (const msq::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const msq::InvalidArgument& e) {
    std::cerr << "invalid setup: " << e.what() << "\n";
    return kConfigError;
  } catch (const msq::NumericalError& e) {
    std::cerr << "numerical invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
