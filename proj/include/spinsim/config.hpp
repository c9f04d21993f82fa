#pragma once
#include "spinsim/pulse_engine.hpp"
#include "spinsim/spectroscopy.hpp"
#include "spinsim/system_model.hpp"

#include <string>

// Flat sectioned key=value experiment configuration. Unknown sections or
// keys are rejected so typos cannot silently fall back to defaults.
namespace spinsim {

struct ExperimentConfig {
  ClusterConfig cluster;          // [cluster] b_ortho_hz, offset_hz
  PropagationConfig propagation;  // [propagation] dt_us, convergence
  AcquireParams acquisition;  // [acquisition] points, dwell_us, broadening_hz,
                              //               read_angle_deg
  struct Measurement {
    double total = 1.0;  // normalization constant for the spectrum inversion
    double thermal_epsilon = 0.1;  // reference-spectrum polarization
  } measurement;                   // [measurement] total, thermal_epsilon
  struct Paths {
    std::string output_dir = ".";
  } paths;  // [paths] output_dir
};

// Parse from text; errors carry the line number.
ExperimentConfig parse_config(const std::string& text);

// Read and parse a file; IoError if unreadable.
ExperimentConfig load_config(const std::string& path);

}  // namespace spinsim
