#pragma once
#include "spinsim/pulse_engine.hpp"
#include "spinsim/spectroscopy.hpp"

#include <optional>
#include <string>
#include <vector>

// Text format for pulse sequences: one directive per line, `#` comments,
// key=value arguments with the unit spelled in the key name (dur_ms, amp_hz).
// Directives: lock, pulse, gauss, gradient, delay, acquire. At most one
// acquire, and it must be the last directive.
namespace spinsim {

struct PulseProgram {
  std::vector<PulseSegment> segments;
  bool has_acquire = false;
  struct AcquireOverrides {
    std::optional<int> points;
    std::optional<double> dwell_s;
    std::optional<double> broadening_hz;
    std::optional<double> read_angle_rad;
  } acquire;

  // Acquisition parameters with the program's overrides applied.
  AcquireParams acquire_params(AcquireParams base) const;
};

// Parse errors carry 1-based line and column.
PulseProgram parse_pulse_program(const std::string& text);

// Canonical text form. parse(print(parse(t))) == parse(t): printed values are
// chosen so that re-parsing reproduces the stored doubles bit-exactly.
std::string print_pulse_program(const PulseProgram& prog);

// Builtin sequences: "fig1" (frequency-swept lock + acquire) and "fig2d"
// (hard 90 about -Y, gradient, acquire). Throws ConfigError on other names.
PulseProgram builtin_program(const std::string& name);
bool is_builtin_program(const std::string& name);

}  // namespace spinsim
