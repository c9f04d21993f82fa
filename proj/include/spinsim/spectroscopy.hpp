#pragma once
#include "spinsim/state_prep.hpp"

#include <array>
#include <vector>

// Linear-response spectra in stick and FID/FFT form, plus the single-quantum
// transition table used for peak assignment and population inversion.
namespace spinsim {

// One allowed transition: lo sits in sector M_Z, hi in M_Z + 1.
// freq = (E_hi - E_lo) / 2 pi (signed); weight = |<hi|S+|lo>|^2.
struct Transition {
  int lo = 0, hi = 0;
  int mz_lo = 0;
  double freq_hz = 0.0;
  double weight = 0.0;
};

struct TransitionTable {
  std::vector<Transition> entries;  // weight > 1e-12 only
};

TransitionTable transition_table(const EigenSystem& es);

// Indices into tt.entries for the six transitions linking the seven
// high-spin states, ordered by the lower sector M_Z = -3..+2.
std::array<int, 6> highspin_transition_indices(const TransitionTable& tt,
                                               const std::array<int, 7>& hs);

struct StickEntry {
  int lo = 0, hi = 0;
  double freq_hz = 0.0;
  double intensity = 0.0;  // (p_hi - p_lo) * weight; emission is negative
  double weight = 0.0;
};

struct AcquireParams {
  int points = 8192;           // power of two
  double dwell_s = 50e-6;
  double broadening_hz = 2.0;  // exponential line broadening (Lorentzian FWHM)
  double read_angle_deg = 1.0;
};

struct Spectrum {
  // Stick form (exact population differences times weights).
  std::vector<StickEntry> sticks;
  // Sampled form (FID + FFT); empty for stick-only spectra.
  std::vector<double> freq_hz;  // ascending, fftshifted grid
  std::vector<cplx> amp;
  AcquireParams meta;
  bool aliasing_warning = false;
};

// Populations are read from the diagonal of rho in the eigenbasis, so the
// sticks are exact for any state that is diagonal there (thermal states,
// post-gradient states); coherences are deliberately ignored in this form.
Spectrum stick_spectrum(const DensityMatrix& rho, const EigenSystem& es,
                        const TransitionTable& tt);

// Small-angle reading pulse about Y, then s(t) = Tr{rho(t) S+} sampled at the
// dwell interval under free dipolar evolution with exponential broadening,
// Fourier transformed. The evolution is carried out analytically in the
// eigenbasis (each coherence rotates at its own transition frequency), which
// is exact. Sets aliasing_warning when a weighted transition of `tt` lies
// beyond Nyquist.
Spectrum fid_spectrum(const DensityMatrix& rho, const EigenSystem& es,
                      const ClusterOps& ops, const TransitionTable& tt,
                      const AcquireParams& acq);

struct Peak {
  double freq_hz = 0.0;
  double amplitude = 0.0;  // signed (real part at the refined maximum)
};

// Local maxima of |amp| above 3x the median magnitude, positions refined by
// parabolic interpolation.
std::vector<Peak> peak_pick(const Spectrum& spec);

// Signed amplitude of the line nearest freq_hz: local extremum of Re(amp)
// within +-window_hz, parabolic refinement; falls back to the nearest grid
// value when no extremum stands out (an absent line reads as ~0).
double signed_amplitude_near(const Spectrum& spec, double freq_hz,
                             double window_hz = 3.0);

}  // namespace spinsim
