#include "spinsim/config.hpp"

#include "spinsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinsim {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc{} || p != e || v.empty() || !std::isfinite(x))
    fail(line, "malformed number '" + v + "' for key '" + key + "'");
  return x;
}

int to_int(const std::string& v, int line, const std::string& key) {
  const double x = to_double(v, line, key);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    fail(line, "key '" + key + "' wants an integer, got '" + v + "'");
  return static_cast<int>(x);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "cluster" && section != "propagation" &&
          section != "acquisition" && section != "measurement" &&
          section != "paths")
        fail(lineno, "unknown section '" + section + "'");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty()) fail(lineno, "key '" + key + "' outside any section");

    if (section == "cluster") {
      if (key == "b_ortho_hz")
        cfg.cluster.b_ortho_hz = to_double(val, lineno, key);
      else if (key == "offset_hz")
        cfg.cluster.offset_hz = to_double(val, lineno, key);
      else
        fail(lineno, "unknown key '" + key + "' in [cluster]");
    } else if (section == "propagation") {
      if (key == "dt_us") {
        const double v = to_double(val, lineno, key);
        if (v <= 0) fail(lineno, "dt_us must be positive");
        cfg.propagation.dt = v * 1e-6;
      } else if (key == "convergence") {
        const double v = to_double(val, lineno, key);
        if (v <= 0) fail(lineno, "convergence must be positive");
        cfg.propagation.convergence = v;
      } else {
        fail(lineno, "unknown key '" + key + "' in [propagation]");
      }
    } else if (section == "acquisition") {
      if (key == "points") {
        const int v = to_int(val, lineno, key);
        if (v < 2 || (v & (v - 1)) != 0)
          fail(lineno, "points must be a power of two >= 2");
        cfg.acquisition.points = v;
      } else if (key == "dwell_us") {
        const double v = to_double(val, lineno, key);
        if (v <= 0) fail(lineno, "dwell_us must be positive");
        cfg.acquisition.dwell_s = v * 1e-6;
      } else if (key == "broadening_hz") {
        const double v = to_double(val, lineno, key);
        if (v < 0) fail(lineno, "broadening_hz must be non-negative");
        cfg.acquisition.broadening_hz = v;
      } else if (key == "read_angle_deg") {
        cfg.acquisition.read_angle_deg = to_double(val, lineno, key);
      } else {
        fail(lineno, "unknown key '" + key + "' in [acquisition]");
      }
    } else if (section == "measurement") {
      if (key == "total") {
        const double v = to_double(val, lineno, key);
        if (v <= 0) fail(lineno, "total must be positive");
        cfg.measurement.total = v;
      } else if (key == "thermal_epsilon") {
        const double v = to_double(val, lineno, key);
        if (std::abs(v) > 1.0 / 3.0 || v == 0.0)
          fail(lineno, "thermal_epsilon must be nonzero with |eps| <= 1/3");
        cfg.measurement.thermal_epsilon = v;
      } else {
        fail(lineno, "unknown key '" + key + "' in [measurement]");
      }
    } else {  // paths
      if (key == "output_dir") {
        if (val.empty()) fail(lineno, "output_dir must not be empty");
        cfg.paths.output_dir = val;
      } else {
        fail(lineno, "unknown key '" + key + "' in [paths]");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace spinsim
