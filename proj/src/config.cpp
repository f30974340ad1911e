#include "msq/config.hpp"

#include <algorithm>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace msq {

const char* to_string(ScanType t) {
  switch (t) {
    case ScanType::phase:
      return "phase";
    case ScanType::position:
      return "position";
    case ScanType::width:
      return "width";
  }
  return "?";
}

const char* to_string(ScanDirection d) {
  switch (d) {
    case ScanDirection::x:
      return "x";
    case ScanDirection::y:
      return "y";
    case ScanDirection::diagonal:
      return "x=y";
    case ScanDirection::antidiagonal:
      return "x=-y";
  }
  return "?";
}

double direction_angle(ScanDirection d) {
  switch (d) {
    case ScanDirection::x:
      return 0.0;
    case ScanDirection::y:
      return 0.5 * std::numbers::pi;
    case ScanDirection::diagonal:
      return 0.25 * std::numbers::pi;
    case ScanDirection::antidiagonal:
      return -0.25 * std::numbers::pi;
  }
  return 0.0;
}

double ExperimentConfig::q0() const {
  if (q0_rad_per_mm > 0.0) return q0_rad_per_mm;
  const auto g = grid();
  return (g.size(rgr_axis) / 4) * g.dq(rgr_axis);
}

namespace {

std::string join(const std::vector<ConfigDiagnostic>& d) {
  std::string s = "invalid configuration:";
  for (const auto& e : d) {
    s += "\n  ";
    if (e.line > 0) s += "line " + std::to_string(e.line) + ": ";
    s += e.message;
  }
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct ValueError {
  std::string message;
};

double to_number(const std::string& v, bool allow_inf = false) {
  double x = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr == first) throw ValueError{"malformed number '" + v + "'"};
  if (ptr != last) {
    const std::string rest = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (!rest.empty() && std::isalpha(static_cast<unsigned char>(rest[0]))) {
      throw ValueError{"unexpected unit '" + rest + "': the unit is fixed by the key name"};
    }
    throw ValueError{"malformed number '" + v + "'"};
  }
  if (std::isnan(x) || (!allow_inf && std::isinf(x))) throw ValueError{"value must be finite"};
  return x;
}

int to_int(const std::string& v) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ValueError{"malformed integer '" + v + "'"};
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValueError{"expected true or false, got '" + v + "'"};
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Setter = std::function<void(const std::string&)>;

struct Schema {
  std::vector<std::string> sections;
  std::map<std::string, std::map<std::string, Setter>> keys;
};

struct Raw {
  // Keys that were present, with their line numbers.
  std::map<std::string, int> seen;
  bool has(const std::string& k) const { return seen.count(k) != 0; }
  int line(const std::string& k) const {
    auto it = seen.find(k);
    return it == seen.end() ? 0 : it->second;
  }
};

Schema make_schema(ExperimentConfig& c, double& s_max_in) {
  Schema s;
  s.sections = {"grid", "medium", "gain_profile", "rgr", "pump", "blo", "detector", "scan", "engine", "mode_count"};
  auto num = [](double& dst, bool inf = false) { return [&dst, inf](const std::string& v) { dst = to_number(v, inf); }; };
  auto& k = s.keys;
  k["grid"]["nx"] = [&](const std::string& v) { c.nx = to_int(v); };
  k["grid"]["ny"] = [&](const std::string& v) { c.ny = to_int(v); };
  k["grid"]["pitch_mm"] = num(c.pitch_mm);
  k["grid"]["pitch_y_mm"] = num(c.pitch_y_mm);

  k["medium"]["length_mm"] = num(c.medium.length_mm);
  k["medium"]["wavelength_nm"] = num(c.medium.wavelength_nm);
  k["medium"]["refractive_index"] = num(c.medium.refractive_index);
  k["medium"]["slices"] = [&](const std::string& v) { c.medium.slices = to_int(v); };
  k["medium"]["gain"] = num(c.medium.gain);

  k["gain_profile"]["s_max"] = num(s_max_in);
  k["gain_profile"]["q_peak_rad_per_mm"] = num(c.profile.q_peak);
  k["gain_profile"]["q_sigma_rad_per_mm"] = num(c.profile.q_sigma, true);
  k["gain_profile"]["q_gap_floor"] = num(c.profile.q_gap_floor);
  k["gain_profile"]["pump_phase_rad"] = num(c.profile.pump_phase);

  k["rgr"]["q0_rad_per_mm"] = [&](const std::string& v) { c.q0_rad_per_mm = v == "auto" ? 0.0 : to_number(v); };
  k["rgr"]["direction"] = [&](const std::string& v) {
    if (v == "x") {
      c.rgr_axis = Axis::x;
    } else if (v == "y") {
      c.rgr_axis = Axis::y;
    } else {
      throw ValueError{"direction must be x or y"};
    }
  };

  k["pump"]["waist_mm"] = num(c.pump_waist_mm);
  k["pump"]["aperture_radius_mm"] = num(c.aperture_radius_mm);
  k["pump"]["aperture_order"] = num(c.aperture_order);

  k["blo"]["mask"] = [&](const std::string& v) {
    if (v == "slit") {
      c.blo.mask = MaskShape::slit;
    } else if (v == "gaussian") {
      c.blo.mask = MaskShape::gaussian;
    } else if (v == "uniform") {
      c.blo.mask = MaskShape::uniform;
    } else {
      throw ValueError{"mask must be slit, gaussian or uniform"};
    }
  };
  k["blo"]["width_mm"] = num(c.blo.width_mm);
  k["blo"]["height_mm"] = num(c.blo.height_mm);
  k["blo"]["center_x_mm"] = num(c.blo.center_x_mm);
  k["blo"]["center_y_mm"] = num(c.blo.center_y_mm);
  k["blo"]["angle_deg"] = num(c.blo_angle_deg);
  k["blo"]["gain"] = num(c.blo.gain);
  k["blo"]["filter_rad_per_mm"] = [&](const std::string& v) {
    if (v == "auto") {
      c.blo.filter_radius.reset();
    } else if (v == "none") {
      c.blo.filter_radius = std::numeric_limits<double>::infinity();
    } else {
      c.blo.filter_radius = to_number(v);
    }
  };
  k["blo"]["ideal_balanced"] = [&](const std::string& v) { c.blo.ideal_balanced = to_bool(v); };

  k["detector"]["efficiency"] = num(c.efficiency);
  k["detector"]["electronic_floor_db"] = num(c.electronic_floor_db);

  k["scan"]["type"] = [&](const std::string& v) {
    if (v == "phase") {
      c.scan.type = ScanType::phase;
    } else if (v == "position") {
      c.scan.type = ScanType::position;
    } else if (v == "width") {
      c.scan.type = ScanType::width;
    } else {
      throw ValueError{"type must be phase, position or width"};
    }
  };
  k["scan"]["start"] = num(c.scan.start);
  k["scan"]["stop"] = num(c.scan.stop);
  k["scan"]["steps"] = [&](const std::string& v) { c.scan.steps = to_int(v); };
  k["scan"]["direction"] = [&](const std::string& v) {
    if (v == "x") {
      c.scan.direction = ScanDirection::x;
    } else if (v == "y") {
      c.scan.direction = ScanDirection::y;
    } else if (v == "x=y") {
      c.scan.direction = ScanDirection::diagonal;
    } else if (v == "x=-y") {
      c.scan.direction = ScanDirection::antidiagonal;
    } else {
      throw ValueError{"direction must be x, y, x=y or x=-y"};
    }
  };

  k["engine"]["backend"] = [&](const std::string& v) {
    if (v == "implicit") {
      c.engine = Engine::implicit;
    } else if (v == "dense") {
      c.engine = Engine::dense;
    } else {
      throw ValueError{"backend must be dense or implicit"};
    }
  };
  k["engine"]["structural_tol"] = num(c.tolerances.structural);
  k["engine"]["exact_tol"] = num(c.tolerances.exact);
  k["engine"]["mode_cap"] = [&](const std::string& v) {
    const int n = to_int(v);
    if (n <= 0) throw ValueError{"mode_cap must be positive"};
    c.mode_cap = static_cast<std::size_t>(n);
  };

  k["mode_count"]["region_mm"] = num(c.region_mm);
  k["mode_count"]["coherence_waist_mm"] = num(c.coherence_waist_mm);
  return s;
}

void validate(ExperimentConfig& c, const Raw& raw, double s_max_in, std::vector<ConfigDiagnostic>& diag) {
  auto fail = [&](const std::string& key, const std::string& msg) { diag.push_back({raw.line(key), msg}); };
  const std::size_t before = diag.size();

  if (c.nx < 2 || c.nx % 2 != 0) fail("grid.nx", "nx must be even and at least 2");
  if (c.ny < 2 || c.ny % 2 != 0) fail("grid.ny", "ny must be even and at least 2");
  if (!(c.pitch_mm > 0.0)) fail("grid.pitch_mm", "pitch_mm must be positive");
  if (!raw.has("grid.pitch_y_mm")) c.pitch_y_mm = 2.0 * c.pitch_mm;  // square detection pixels after an x overlap
  if (!(c.pitch_y_mm > 0.0)) fail("grid.pitch_y_mm", "pitch_y_mm must be positive");

  if (!(c.medium.length_mm >= 0.0)) fail("medium.length_mm", "length_mm must be >= 0");
  if (!(c.medium.wavelength_nm > 0.0)) fail("medium.wavelength_nm", "wavelength_nm must be positive");
  if (!(c.medium.refractive_index > 0.0)) fail("medium.refractive_index", "refractive_index must be positive");
  if (c.medium.slices < 1) fail("medium.slices", "slices must be >= 1");
  if (raw.has("gain_profile.s_max")) {
    if (!(s_max_in >= 0.0)) {
      fail("gain_profile.s_max", "s_max must be >= 0");
    } else if (!raw.has("medium.gain")) {
      c.medium.gain = squeeze_to_gain(s_max_in);
    } else if (c.medium.gain >= 1.0 &&
               std::abs(gain_to_squeeze(c.medium.gain) - s_max_in) > 1e-9 * std::max(1.0, s_max_in)) {
      fail("gain_profile.s_max", "s_max is inconsistent with medium gain (G = cosh^2 s_max)");
    }
  }
  const bool gain_ok = c.medium.gain >= 1.0;
  if (gain_ok) {
    c.profile.s_max = gain_to_squeeze(c.medium.gain);
  } else {
    fail("medium.gain", "gain must be >= 1");
  }

  bool grid_ok = diag.size() == before;
  if (grid_ok) {
    if (!(c.q0_rad_per_mm >= 0.0)) {
      fail("rgr.q0_rad_per_mm", "q0_rad_per_mm must be positive or auto");
    } else {
      try {
        (void)rgr_shift(RgrOverlap{c.q0(), c.rgr_axis}, c.grid());
      } catch (const Error& e) {
        fail("rgr.q0_rad_per_mm", e.what());
        grid_ok = false;
      }
    }
  }
  if (grid_ok) {
    if (!raw.has("gain_profile.q_peak_rad_per_mm")) c.profile.q_peak = c.q0();
    if (!raw.has("gain_profile.q_sigma_rad_per_mm")) c.profile.q_sigma = 3.0 * c.q0();
  }
  if (!(c.profile.q_peak >= 0.0)) fail("gain_profile.q_peak_rad_per_mm", "q_peak_rad_per_mm must be >= 0");
  if (!(c.profile.q_sigma > 0.0)) fail("gain_profile.q_sigma_rad_per_mm", "q_sigma_rad_per_mm must be positive");
  if (!(c.profile.q_gap_floor >= 0.0 && c.profile.q_gap_floor <= 1.0)) {
    fail("gain_profile.q_gap_floor", "q_gap_floor must lie in [0, 1]");
  }

  if (!(c.pump_waist_mm > 0.0)) fail("pump.waist_mm", "waist_mm must be positive");
  if (!(c.aperture_radius_mm >= 0.0)) fail("pump.aperture_radius_mm", "aperture_radius_mm must be >= 0");
  if (!(c.aperture_order > 0.0)) fail("pump.aperture_order", "aperture_order must be positive");

  c.blo.angle_rad = c.blo_angle_deg * std::numbers::pi / 180.0;
  if (!raw.has("blo.gain")) c.blo.gain = c.medium.gain;
  if (!(c.blo.gain >= 1.0) && (gain_ok || raw.has("blo.gain"))) fail("blo.gain", "blo gain must be >= 1");
  if (c.blo.mask != MaskShape::uniform) {
    if (!(c.blo.width_mm > 0.0)) fail("blo.width_mm", "width_mm must be positive");
    if (!(c.blo.height_mm > 0.0)) fail("blo.height_mm", "height_mm must be positive");
  }
  if (c.blo.filter_radius && !(*c.blo.filter_radius > 0.0)) fail("blo.filter_rad_per_mm", "filter must be positive");

  if (!(c.efficiency >= 0.0 && c.efficiency <= 1.0)) fail("detector.efficiency", "efficiency must lie in [0, 1]");
  if (!(c.electronic_floor_db < 0.0)) fail("detector.electronic_floor_db", "electronic_floor_db must be negative");

  if (c.scan.steps < 2) fail("scan.steps", "steps must be >= 2");
  if (!(c.scan.stop > c.scan.start)) fail("scan.stop", "stop must exceed start");
  if (c.scan.type == ScanType::width && !(c.scan.start > 0.0)) fail("scan.start", "widths must be positive");

  if (!(c.tolerances.structural > 0.0)) fail("engine.structural_tol", "structural_tol must be positive");
  if (!(c.tolerances.exact > 0.0)) fail("engine.exact_tol", "exact_tol must be positive");

  if (!(c.region_mm > 0.0)) fail("mode_count.region_mm", "region_mm must be positive");
  if (!(c.coherence_waist_mm > 0.0)) fail("mode_count.coherence_waist_mm", "coherence_waist_mm must be positive");
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigDiagnostic> diagnostics)
    : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  double s_max_in = 0.0;
  const Schema schema = make_schema(c, s_max_in);
  Raw raw;
  std::vector<ConfigDiagnostic> diag;
  std::set<std::string> sections_seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        diag.push_back({line_no, "malformed section header"});
        section.clear();
        continue;
      }
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!schema.keys.count(section)) {
        diag.push_back({line_no, "unknown section [" + section + "]"});
        section = "?";
      } else if (!sections_seen.insert(section).second) {
        diag.push_back({line_no, "duplicate section [" + section + "]"});
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      diag.push_back({line_no, "expected key = value"});
      continue;
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (section.empty()) {
      diag.push_back({line_no, "key '" + key + "' outside of any section"});
      continue;
    }
    if (section == "?") continue;  // already reported
    const auto& keys = schema.keys.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) {
      diag.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    const std::string full = section + "." + key;
    if (raw.has(full)) {
      diag.push_back({line_no, "duplicate key '" + key + "' in [" + section + "]"});
      continue;
    }
    raw.seen[full] = line_no;
    if (value.empty()) {
      diag.push_back({line_no, "missing value for '" + key + "'"});
      continue;
    }
    try {
      it->second(value);
    } catch (const ValueError& e) {
      diag.push_back({line_no, key + ": " + e.message});
    }
  }
  validate(c, raw, s_max_in, diag);
  if (!diag.empty()) {
    std::stable_sort(diag.begin(), diag.end(), [](const ConfigDiagnostic& a, const ConfigDiagnostic& b) {
      return (a.line == 0 ? INT_MAX : a.line) < (b.line == 0 ? INT_MAX : b.line);
    });
    throw ConfigError(std::move(diag));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "cannot open config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[grid]\n"
    << "nx = " << c.nx << "\n"
    << "ny = " << c.ny << "\n"
    << "pitch_mm = " << fmt(c.pitch_mm) << "\n"
    << "pitch_y_mm = " << fmt(c.pitch_y_mm) << "\n\n";
  o << "[medium]\n"
    << "length_mm = " << fmt(c.medium.length_mm) << "\n"
    << "wavelength_nm = " << fmt(c.medium.wavelength_nm) << "\n"
    << "refractive_index = " << fmt(c.medium.refractive_index) << "\n"
    << "slices = " << c.medium.slices << "\n"
    << "gain = " << fmt(c.medium.gain) << "\n\n";
  o << "[gain_profile]\n"
    << "s_max = " << fmt(c.profile.s_max) << "\n"
    << "q_peak_rad_per_mm = " << fmt(c.profile.q_peak) << "\n"
    << "q_sigma_rad_per_mm = " << fmt(c.profile.q_sigma) << "\n"
    << "q_gap_floor = " << fmt(c.profile.q_gap_floor) << "\n"
    << "pump_phase_rad = " << fmt(c.profile.pump_phase) << "\n\n";
  o << "[rgr]\n"
    << "q0_rad_per_mm = " << (c.q0_rad_per_mm > 0.0 ? fmt(c.q0_rad_per_mm) : std::string("auto")) << "\n"
    << "direction = " << (c.rgr_axis == Axis::x ? "x" : "y") << "\n\n";
  o << "[pump]\n"
    << "waist_mm = " << fmt(c.pump_waist_mm) << "\n"
    << "aperture_radius_mm = " << fmt(c.aperture_radius_mm) << "\n"
    << "aperture_order = " << fmt(c.aperture_order) << "\n\n";
  std::string filter = "auto";
  if (c.blo.filter_radius) filter = std::isinf(*c.blo.filter_radius) ? "none" : fmt(*c.blo.filter_radius);
  o << "[blo]\n"
    << "mask = " << to_string(c.blo.mask) << "\n"
    << "width_mm = " << fmt(c.blo.width_mm) << "\n"
    << "height_mm = " << fmt(c.blo.height_mm) << "\n"
    << "center_x_mm = " << fmt(c.blo.center_x_mm) << "\n"
    << "center_y_mm = " << fmt(c.blo.center_y_mm) << "\n"
    << "angle_deg = " << fmt(c.blo_angle_deg) << "\n"
    << "gain = " << fmt(c.blo.gain) << "\n"
    << "filter_rad_per_mm = " << filter << "\n"
    << "ideal_balanced = " << (c.blo.ideal_balanced ? "true" : "false") << "\n\n";
  o << "[detector]\n"
    << "efficiency = " << fmt(c.efficiency) << "\n"
    << "electronic_floor_db = " << fmt(c.electronic_floor_db) << "\n\n";
  o << "[scan]\n"
    << "type = " << to_string(c.scan.type) << "\n"
    << "start = " << fmt(c.scan.start) << "\n"
    << "stop = " << fmt(c.scan.stop) << "\n"
    << "steps = " << c.scan.steps << "\n"
    << "direction = " << to_string(c.scan.direction) << "\n\n";
  o << "[engine]\n"
    << "backend = " << to_string(c.engine) << "\n"
    << "structural_tol = " << fmt(c.tolerances.structural) << "\n"
    << "exact_tol = " << fmt(c.tolerances.exact) << "\n"
    << "mode_cap = " << c.mode_cap << "\n\n";
  o << "[mode_count]\n"
    << "region_mm = " << fmt(c.region_mm) << "\n"
    << "coherence_waist_mm = " << fmt(c.coherence_waist_mm) << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace msq
