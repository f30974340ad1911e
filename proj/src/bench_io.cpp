#include "msq/bench_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "msq/error.hpp"

namespace msq {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool spatial(const ScanResult& r) { return r.variable != "chi"; }

std::string first_column(const ScanResult& r) { return r.variable + "_" + r.unit; }

void header(std::ostringstream& o, const ScanResult& r, const ExperimentConfig& config) {
  o << "# msq " << kVersion << "\n";
  for (const auto& [k, v] : r.metadata) o << "# " << k << " = " << v << "\n";
  std::istringstream cfg(serialize_config(config));
  for (std::string line; std::getline(cfg, line);) {
    if (!line.empty()) o << "# config: " << line << "\n";
  }
}

}  // namespace

ExperimentConfig default_config() { return parse_config(""); }

std::string scan_csv(const ScanResult& r, const ExperimentConfig& config) {
  std::ostringstream o;
  header(o, r, config);
  if (!spatial(r)) {
    o << "chi_rad,ratio,db,db_corrected\n";
    for (const auto& p : r.points) {
      o << fmt(p.value) << ',' << fmt(p.ratio) << ',' << fmt(p.db) << ',' << fmt(p.db_corrected) << '\n';
    }
    return o.str();
  }
  o << first_column(r)
    << ",ratio,db,db_corrected,chi_rad,center_x_mm,center_y_mm,waist_narrow_mm,waist_long_mm,fit_residual\n";
  for (const auto& p : r.points) {
    o << fmt(p.value) << ',' << fmt(p.ratio) << ',' << fmt(p.db) << ',' << fmt(p.db_corrected) << ','
      << fmt(p.chi) << ',' << fmt(p.lo_fit.center_x) << ',' << fmt(p.lo_fit.center_y) << ','
      << fmt(p.lo_fit.waist_u) << ',' << fmt(p.lo_fit.waist_v) << ',' << fmt(p.lo_fit.residual) << '\n';
  }
  return o.str();
}

std::string scan_json(const ScanResult& r, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["variable"] = r.variable;
  j["unit"] = r.unit;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["config"] = serialize_config(config);
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : r.points) {
    nlohmann::ordered_json e;
    e[first_column(r)] = p.value;
    e["ratio"] = p.ratio;
    e["db"] = p.db;
    e["db_corrected"] = p.db_corrected;
    if (spatial(r)) {
      e["chi_rad"] = p.chi;
      e["center_x_mm"] = p.lo_fit.center_x;
      e["center_y_mm"] = p.lo_fit.center_y;
      e["waist_narrow_mm"] = p.lo_fit.waist_u;
      e["waist_long_mm"] = p.lo_fit.waist_v;
      e["fit_residual"] = p.lo_fit.residual;
    }
    pts.push_back(e);
  }
  j["points"] = pts;
  return j.dump(2) + "\n";
}

ModeCountReport mode_count_report(const ExperimentConfig& config, bool simulate) {
  ModeCountReport rep{};
  rep.l_coh_mm = coherence_length(config.medium.wavelength_nm, config.medium.length_mm, config.medium.refractive_index);
  rep.n_theory = mode_count_theory(config.pump_waist_mm, rep.l_coh_mm);
  rep.n_measured_formula = mode_count_measured(config.region_mm, config.coherence_waist_mm);
  if (!simulate) return rep;

  const ScanSpec ps = scan_for(config, ScanType::position);
  ExperimentConfig wc = config;
  wc.scan = scan_for(config, ScanType::width);
  const auto pos = position_scan(config, ps.direction, scan_values(ps));
  const auto wid = width_scan(wc, scan_values(wc.scan));
  const auto w0 = coherence_width(wid);
  if (!w0) throw NumericalError("mode count: the squeezing never halves over the width scan");
  rep.simulated = true;
  rep.plateau_mm = plateau_length(pos);
  rep.w0_mm = w0->width_mm;
  rep.n_simulated = mode_count_measured(rep.plateau_mm, rep.w0_mm);
  return rep;
}

std::string mode_count_json(const ModeCountReport& rep, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config_hash"] = config_hash(config);
  j["l_coh_mm"] = rep.l_coh_mm;
  j["n_theory"] = rep.n_theory;
  j["n_measured_formula"] = rep.n_measured_formula;
  if (rep.simulated) {
    j["plateau_mm"] = rep.plateau_mm;
    j["w0_mm"] = rep.w0_mm;
    j["n_simulated"] = rep.n_simulated;
  }
  return j.dump(2) + "\n";
}

std::string plot_script(const std::string& csv_path, const ScanResult& r) {
  const std::string x = spatial(r) ? first_column(r) : "chi_rad";
  std::ostringstream o;
  o << "#!/usr/bin/env python3\n"
    << "# Plots " << csv_path << "; generated by msq " << kVersion << ".\n"
    << "import csv\n"
    << "import matplotlib\n"
    << "matplotlib.use(\"Agg\")\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "path = " << nlohmann::json(csv_path).dump() << "\n"
    << "with open(path, newline=\"\") as f:\n"
    << "    rows = list(csv.DictReader(line for line in f if not line.startswith(\"#\")))\n"
    << "x = [float(r[" << nlohmann::json(x).dump() << "]) for r in rows]\n"
    << "fig, ax = plt.subplots(figsize=(6, 4))\n"
    << "ax.plot(x, [float(r[\"db\"]) for r in rows], \"o-\", label=\"measured\")\n"
    << "ax.plot(x, [float(r[\"db_corrected\"]) for r in rows], \"s--\", label=\"floor corrected\")\n"
    << "ax.axhline(0.0, color=\"gray\", lw=0.8)\n"
    << "ax.set_xlabel(" << nlohmann::json(x).dump() << ")\n"
    << "ax.set_ylabel(\"noise relative to shot noise (dB)\")\n"
    << "ax.legend()\n"
    << "fig.tight_layout()\n"
    << "fig.savefig(path + \".png\", dpi=150)\n";
  return o.str();
}

}  // namespace msq
