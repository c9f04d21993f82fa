#include "spinsim/csv_export.hpp"

#include "spinsim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spinsim {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("rename failed: " + tmp + " -> " + path);
  }
}

void export_sampled_spectrum(const Spectrum& spec, const std::string& path) {
  std::ostringstream os;
  os << "freq_hz,real,imag,magnitude\n";
  for (size_t i = 0; i < spec.freq_hz.size(); ++i) {
    const cplx a = spec.amp[i];
    os << num(spec.freq_hz[i]) << ',' << num(std::real(a)) << ','
       << num(std::imag(a)) << ',' << num(std::abs(a)) << '\n';
  }
  write_text_atomic(path, os.str());
}

void export_stick_spectrum(const Spectrum& spec, const std::string& path) {
  std::ostringstream os;
  os << "freq_hz,intensity\n";
  for (const StickEntry& s : spec.sticks) {
    if (std::abs(s.intensity) <= 1e-12) continue;
    os << num(s.freq_hz) << ',' << num(s.intensity) << '\n';
  }
  write_text_atomic(path, os.str());
}

void export_distribution(const MeasurementReport& rep,
                         const std::string& path) {
  std::ostringstream os;
  os << "m,probability,theory,abs_error\n";
  for (int m = -3; m <= 3; ++m) {
    const double p = rep.distribution.at_m(m);
    const double th = rep.theory.at_m(m);
    os << m << ',' << num(p) << ',' << num(th) << ',' << num(std::abs(p - th))
       << '\n';
  }
  write_text_atomic(path, os.str());
}

void export_eigen_table(const EigenSystem& es, const std::string& path) {
  std::ostringstream os;
  os << "index,mz,energy_rad_per_s,freq_hz,s_squared,s_eff,k\n";
  for (size_t i = 0; i < es.states.size(); ++i) {
    const EigenState& st = es.states[i];
    os << i << ',' << st.mz << ',' << num(st.energy) << ','
       << num(st.energy / (2.0 * std::numbers::pi)) << ','
       << num(st.s_squared) << ',' << num(st.s_eff) << ',' << st.k << '\n';
  }
  write_text_atomic(path, os.str());
}

std::string report_text(const MeasurementReport& rep) {
  std::ostringstream os;
  os << "initial " << rep.initial_label << "  protocol " << rep.protocol
     << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%4s  %12s  %12s  %10s\n", "m",
                "probability", "theory", "abs_error");
  os << line;
  for (int m = -3; m <= 3; ++m) {
    const double p = rep.distribution.at_m(m);
    const double th = rep.theory.at_m(m);
    std::snprintf(line, sizeof line, "%+4d  %12.6f  %12.6f  %10.2e\n", m, p, th,
                  std::abs(p - th));
    os << line;
  }
  std::snprintf(line, sizeof line,
                "\n<Sx^2> %.6f (theory %.6f)   Linf %.4f (direct %.4f)\n",
                rep.sx2, rep.sx2_theory, rep.linf_error, rep.linf_direct);
  os << line;
  if (rep.protocol == "adiabatic") {
    std::snprintf(line, sizeof line,
                  "max leakage %.4f   high-spin total %.6f\n", rep.max_leakage,
                  rep.highspin_total);
    os << line;
  }
  if (rep.protocol != "oracle") {
    std::snprintf(line, sizeof line, "populated eigenstates (>1e-3): %d\n",
                  rep.populated_states);
    os << line;
  }
  return os.str();
}

}  // namespace spinsim
