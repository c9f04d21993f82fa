#include "spinsim/pulse_program.hpp"

#include "spinsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

namespace spinsim {

namespace {

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ", col " << col << ": " << msg;
  throw ParseError(os.str());
}

struct Tok {
  std::string text;
  int col = 0;  // 1-based
};

std::vector<Tok> tokenize(const std::string& line) {
  std::vector<Tok> toks;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    toks.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return toks;
}

struct Arg {
  std::string key;
  std::string val;
  int col = 0;
  bool used = false;
};

bool ends_with(const std::string& s, const char* suf) {
  const size_t n = std::string(suf).size();
  return s.size() >= n && s.compare(s.size() - n, n, suf) == 0;
}

// The unit lives in the key name; values convert to engine units (s, Hz, rad)
// at parse time.
double unit_factor(const std::string& key) {
  if (ends_with(key, "_ms")) return 1e-3;
  if (ends_with(key, "_us")) return 1e-6;
  if (ends_with(key, "_deg")) return std::numbers::pi / 180.0;
  if (ends_with(key, "_hz")) return 1.0;
  return 1.0;  // dimensionless (points)
}

double parse_literal(const Arg& a, int line) {
  const std::string& s = a.val;
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e || s.empty())
    fail(line, a.col, "malformed number '" + s + "' for key '" + a.key + "'");
  if (!std::isfinite(v))
    fail(line, a.col, "non-finite value for key '" + a.key + "'");
  return v;
}

class Args {
 public:
  Args(std::vector<Arg> args, int line, std::string dir)
      : args_(std::move(args)), line_(line), dir_(std::move(dir)) {}

  std::optional<double> get(const std::string& key) {
    for (Arg& a : args_) {
      if (a.key == key) {
        a.used = true;
        return parse_literal(a, line_) * unit_factor(key);
      }
    }
    return std::nullopt;
  }

  double require(const std::string& key) {
    if (auto v = get(key)) return *v;
    fail(line_, 1, "missing required key '" + key + "' for '" + dir_ + "'");
  }

  std::optional<long long> get_int(const std::string& key) {
    for (Arg& a : args_) {
      if (a.key == key) {
        a.used = true;
        const double v = parse_literal(a, line_);
        if (v != std::floor(v) || std::abs(v) > 1e15)
          fail(line_, a.col, "key '" + key + "' wants an integer, got '" +
                                 a.val + "'");
        return static_cast<long long>(v);
      }
    }
    return std::nullopt;
  }

  void finish() const {
    for (const Arg& a : args_)
      if (!a.used)
        fail(line_, a.col,
             "unknown key '" + a.key + "' for directive '" + dir_ + "'");
  }

 private:
  std::vector<Arg> args_;
  int line_;
  std::string dir_;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Display value whose re-parse (literal * factor) reproduces `stored`
// bit-exactly, so print/parse is a fixed point.
double display_value(double stored, double factor) {
  double v = stored / factor;
  if (v * factor == stored) return v;
  for (int dir = -1; dir <= 1; dir += 2) {
    double w = v;
    for (int k = 0; k < 4; ++k) {
      w = std::nextafter(
          w, dir < 0 ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity());
      if (w * factor == stored) return w;
    }
  }
  return v;
}

std::string kv(const char* key, double stored, double factor) {
  return std::string(key) + "=" + fmt17(display_value(stored, factor));
}

constexpr double kMs = 1e-3;
constexpr double kUs = 1e-6;
constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

AcquireParams PulseProgram::acquire_params(AcquireParams base) const {
  if (acquire.points) base.points = *acquire.points;
  if (acquire.dwell_s) base.dwell_s = *acquire.dwell_s;
  if (acquire.broadening_hz) base.broadening_hz = *acquire.broadening_hz;
  if (acquire.read_angle_rad) base.read_angle_deg = *acquire.read_angle_rad / kDeg;
  return base;
}

PulseProgram parse_pulse_program(const std::string& text) {
  PulseProgram prog;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::vector<Tok> toks = tokenize(line);
    if (toks.empty()) continue;
    if (prog.has_acquire)
      fail(lineno, toks[0].col,
           "'" + toks[0].text + "' after acquire; acquire must be final");

    std::vector<Arg> raw;
    std::set<std::string> seen;
    for (size_t i = 1; i < toks.size(); ++i) {
      const std::string& t = toks[i].text;
      const size_t eq = t.find('=');
      if (eq == std::string::npos || eq == 0)
        fail(lineno, toks[i].col, "expected key=value, got '" + t + "'");
      Arg a;
      a.key = t.substr(0, eq);
      a.val = t.substr(eq + 1);
      a.col = toks[i].col;
      if (!seen.insert(a.key).second)
        fail(lineno, toks[i].col, "duplicate key '" + a.key + "'");
      raw.push_back(std::move(a));
    }
    const std::string& dir = toks[0].text;
    Args args(std::move(raw), lineno, dir);

    if (dir == "lock") {
      LockSegment seg;
      seg.amp_hz = args.get("amp_hz").value_or(seg.amp_hz);
      seg.dur_s = args.get("dur_ms").value_or(seg.dur_s);
      seg.sweep_hz = args.get("sweep_hz").value_or(seg.sweep_hz);
      seg.sweep_s = args.get("sweep_ms").value_or(seg.sweep_s);
      seg.ramp_s = args.get("ramp_ms").value_or(seg.dur_s - seg.sweep_s);
      seg.phase_rad = args.get("phase_deg").value_or(0.0);
      args.finish();
      if (seg.dur_s < 0 || seg.sweep_s < 0 || seg.ramp_s < 0)
        fail(lineno, toks[0].col, "lock durations must be non-negative");
      if (seg.sweep_s + seg.ramp_s > seg.dur_s * (1.0 + 1e-12) + 1e-15)
        fail(lineno, toks[0].col, "lock needs sweep_ms + ramp_ms <= dur_ms");
      prog.segments.emplace_back(seg);
    } else if (dir == "pulse") {
      HardSegment seg;
      seg.angle_rad = args.require("angle_deg");
      seg.phase_rad = args.get("phase_deg").value_or(0.0);
      args.finish();
      prog.segments.emplace_back(seg);
    } else if (dir == "gauss") {
      GaussianSegment seg;
      seg.offset_hz = args.require("offset_hz");
      seg.angle_rad = args.get("angle_deg").value_or(seg.angle_rad);
      seg.dur_s = args.get("dur_ms").value_or(seg.dur_s);
      seg.peak_amp_hz = args.get("amp_hz").value_or(seg.peak_amp_hz);
      args.finish();
      if (seg.dur_s <= 0)
        fail(lineno, toks[0].col, "gauss needs dur_ms > 0");
      prog.segments.emplace_back(seg);
    } else if (dir == "gradient") {
      args.finish();
      prog.segments.emplace_back(GradientSegment{});
    } else if (dir == "delay") {
      DelaySegment seg;
      seg.dur_s = args.require("dur_ms");
      args.finish();
      if (seg.dur_s < 0)
        fail(lineno, toks[0].col, "delay needs dur_ms >= 0");
      prog.segments.emplace_back(seg);
    } else if (dir == "acquire") {
      if (auto p = args.get_int("points")) {
        if (*p < 2) fail(lineno, toks[0].col, "points must be >= 2");
        prog.acquire.points = static_cast<int>(*p);
      }
      if (auto v = args.get("dwell_us")) prog.acquire.dwell_s = *v;
      if (auto v = args.get("broadening_hz")) prog.acquire.broadening_hz = *v;
      if (auto v = args.get("read_angle_deg"))
        prog.acquire.read_angle_rad = *v;
      args.finish();
      prog.has_acquire = true;
    } else {
      fail(lineno, toks[0].col, "unknown directive '" + dir + "'");
    }
  }
  return prog;
}

std::string print_pulse_program(const PulseProgram& prog) {
  std::ostringstream os;
  for (const PulseSegment& s : prog.segments) {
    if (const auto* lock = std::get_if<LockSegment>(&s)) {
      os << "lock " << kv("amp_hz", lock->amp_hz, 1.0) << ' '
         << kv("dur_ms", lock->dur_s, kMs) << ' '
         << kv("sweep_hz", lock->sweep_hz, 1.0) << ' '
         << kv("sweep_ms", lock->sweep_s, kMs) << ' '
         << kv("ramp_ms", lock->ramp_s, kMs);
      if (lock->phase_rad != 0.0)
        os << ' ' << kv("phase_deg", lock->phase_rad, kDeg);
      os << '\n';
    } else if (const auto* hard = std::get_if<HardSegment>(&s)) {
      os << "pulse " << kv("angle_deg", hard->angle_rad, kDeg) << ' '
         << kv("phase_deg", hard->phase_rad, kDeg) << '\n';
    } else if (const auto* g = std::get_if<GaussianSegment>(&s)) {
      os << "gauss " << kv("offset_hz", g->offset_hz, 1.0) << ' '
         << kv("angle_deg", g->angle_rad, kDeg) << ' '
         << kv("dur_ms", g->dur_s, kMs) << ' '
         << kv("amp_hz", g->peak_amp_hz, 1.0) << '\n';
    } else if (std::get_if<GradientSegment>(&s)) {
      os << "gradient\n";
    } else if (const auto* d = std::get_if<DelaySegment>(&s)) {
      os << "delay " << kv("dur_ms", d->dur_s, kMs) << '\n';
    }
  }
  if (prog.has_acquire) {
    os << "acquire";
    if (prog.acquire.points) os << " points=" << *prog.acquire.points;
    if (prog.acquire.dwell_s)
      os << ' ' << kv("dwell_us", *prog.acquire.dwell_s, kUs);
    if (prog.acquire.broadening_hz)
      os << ' ' << kv("broadening_hz", *prog.acquire.broadening_hz, 1.0);
    if (prog.acquire.read_angle_rad)
      os << ' ' << kv("read_angle_deg", *prog.acquire.read_angle_rad, kDeg);
    os << '\n';
  }
  return os.str();
}

bool is_builtin_program(const std::string& name) {
  return name == "fig1" || name == "fig2d";
}

PulseProgram builtin_program(const std::string& name) {
  if (name == "fig1")
    return parse_pulse_program(
        "lock amp_hz=19000 dur_ms=25 sweep_hz=20000 sweep_ms=20 ramp_ms=5\n"
        "acquire\n");
  if (name == "fig2d")
    return parse_pulse_program(
        "pulse angle_deg=90 phase_deg=270\n"
        "gradient\n"
        "acquire\n");
  throw ConfigError("unknown builtin program '" + name + "'");
}

}  // namespace spinsim
