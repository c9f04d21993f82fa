#pragma once
#include "spinsim/measurement.hpp"

#include <string>

// CSV / plain-text exports. All writes are atomic: the content lands in a
// temporary file in the target directory which is then renamed into place.
namespace spinsim {

void write_text_atomic(const std::string& path, const std::string& content);

// freq_hz,real,imag,magnitude
void export_sampled_spectrum(const Spectrum& spec, const std::string& path);

// freq_hz,intensity; rows with |intensity| <= 1e-12 are omitted
void export_stick_spectrum(const Spectrum& spec, const std::string& path);

// m,probability,theory,abs_error; exactly 7 rows, m = -3..+3
void export_distribution(const MeasurementReport& rep, const std::string& path);

// index,mz,energy_rad_per_s,freq_hz,s_squared,s_eff,k
void export_eigen_table(const EigenSystem& es, const std::string& path);

// Human-readable run summary.
std::string report_text(const MeasurementReport& rep);

}  // namespace spinsim
