#pragma once
#include "spinsim/pulse_engine.hpp"
#include "spinsim/spectroscopy.hpp"

#include <string>
#include <vector>

// Full measurement protocols: prepare a pseudopure high-spin state, apply a
// protocol that converts S_X statistics into observable populations, and
// recover the seven-outcome distribution.
namespace spinsim {

struct MeasurementReport {
  std::string initial_label;  // e.g. "(3,+2)"
  std::string protocol;       // "adiabatic" | "hardpulse" | "oracle"
  OutcomeDistribution distribution;        // headline result (sums to `total`)
  OutcomeDistribution direct_distribution; // adiabatic: raw high-spin diagonal
  OutcomeDistribution theory;
  double sx2 = 0.0;         // sum m^2 p(m) over the headline distribution
  double sx2_theory = 0.0;  // (S(S+1) - M^2) / 2
  double linf_error = 0.0;         // max_m |p(m) - theory(m)|, headline
  double linf_direct = 0.0;        // same for the direct diagonal readout
  double max_leakage = 0.0;        // adiabatic protocols only
  int populated_states = 0;        // eigenbasis populations > 1e-3 after protocol
  double highspin_total = 0.0;     // sum of the seven high-spin populations
  std::vector<double> eigen_populations;  // all 64, after the protocol
};

// Exact reference distribution |d^S_{m,M}(pi/2)|^2.
OutcomeDistribution theory_distribution(int s, int mz);

double expectation_sx2(const OutcomeDistribution& d);

// Population inversion from spectra. Both spectra must carry sticks for the
// same six high-spin transitions (lower sector M = -3..+2, in that order).
// Per-transition scale Delta = I_thermal / weight must be common up to noise;
// differences d_m = I_sample(m) / I_thermal(m) * mean(Delta) integrate from
// M = -3 upward, and the additive constant is fixed by sum p = total.
std::array<double, 7> populations_from_spectrum(
    const std::vector<StickEntry>& sample,
    const std::vector<StickEntry>& thermal, double total);

// Resolve a (S=3, M_Z) label to the eigenstate index of the high-spin state.
int resolve_initial(const EigenSystem& es, int s, int mz);

// Spectrometer-style readout: assigned stick intensities of `rho` for the six
// high-spin transitions against a thermal reference, population inversion.
// Assignment works per transition (the experimental analogue is fitting each
// identified peak), so foreign lines from population outside the high-spin
// manifold do not contaminate the six readings the way they would on a
// sampled frequency grid.
OutcomeDistribution invert_from_sticks(const DensityMatrix& rho,
                                       const ClusterOps& ops,
                                       const EigenSystem& es, double eps,
                                       double total);

// Adiabatic protocol: pseudopure (3,MZ) -> frequency-swept lock -> stick
// intensities of the final state against a thermal reference -> population
// inversion (headline). The raw high-spin diagonal of the final density
// matrix is reported alongside. `lock` defaults to the standard conversion
// schedule; `eps` sets the thermal reference.
MeasurementReport measure_mx_adiabatic(const ClusterOps& ops,
                                       const EigenSystem& es, int s, int mz,
                                       const PropagationConfig& pcfg = {},
                                       const LockSegment& lock = {},
                                       double eps = 0.1);

// Hard-pulse protocol: pseudopure (3,MZ) -> 90 degree pulse about -Y ->
// gradient dephasing -> populations grouped by M_Z sector. Exact: equals the
// rotation oracle to machine precision.
MeasurementReport measure_mx_hardpulse(const ClusterOps& ops,
                                       const EigenSystem& es, int s, int mz);

// Analytic oracle (no dynamics): the Wigner distribution itself.
MeasurementReport measure_mx_oracle(int s, int mz);

}  // namespace spinsim
