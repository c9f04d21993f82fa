#pragma once
#include "spinsim/state_prep.hpp"

#include <functional>
#include <variant>
#include <vector>

// Time evolution through the pulse sequences: frequency-swept adiabatic lock,
// hard pulses, Gaussian selective pulses, gradient dephasing.
namespace spinsim {

// One lock pulse: drive amplitude amp_hz along the axis given by phase_rad,
// resonance offset swept linearly over the first sweep_s seconds, amplitude
// ramped to zero with a half-cosine over the final ramp_s seconds.
struct LockSegment {
  double amp_hz = 19000.0;
  double dur_s = 25e-3;
  double sweep_hz = 20000.0;
  double sweep_s = 20e-3;
  double ramp_s = 5e-3;
  double phase_rad = 0.0;
};

// Instantaneous rotation exp(-i angle S_phi), S_phi = S_X cos(phase) +
// S_Y sin(phase); dipolar evolution is neglected during the pulse (the drive
// amplitude is far above the coupling scale).
struct HardSegment {
  double angle_rad = 0.0;
  double phase_rad = 0.0;
};

// Gaussian-enveloped drive rotating at offset_hz (a transition frequency),
// sigma = dur/5, truncated to the [0, dur] window (i.e. +-2.5 sigma).
// peak_amp_hz >= 0 is used literally (0 means no drive at all); a negative
// value requests calibration of the peak so the integrated flip angle on a
// bare two-level transition equals angle_rad.
struct GaussianSegment {
  double angle_rad = 3.14159265358979323846;
  double dur_s = 30e-3;
  double peak_amp_hz = 15.0;
  double offset_hz = 0.0;
};

struct GradientSegment {};

struct DelaySegment {
  double dur_s = 0.0;
};

using PulseSegment = std::variant<LockSegment, HardSegment, GaussianSegment,
                                  GradientSegment, DelaySegment>;

struct PropagationConfig {
  double dt = 0.5e-6;         // seconds per integration step
  double convergence = 1e-4;  // tolerance for the dt-halving check
};

// Fills H with the Hamiltonian at time t (rad/s).
using HamiltonianSampler = std::function<void(double t, CMat& H)>;

// Populations in the instantaneous eigenbasis, tracked through the run by
// maximum-overlap matching between consecutive snapshots. leakage(t) is the
// total-variation distance 0.5*sum_i |p_i(t) - p_i(0)| between the tracked
// populations and their initial values; an adiabatic passage keeps it at 0.
struct AdiabaticityReport {
  std::vector<double> times;
  std::vector<double> leakage;
  double max_leakage = 0.0;
  std::vector<double> initial_pops;
  std::vector<double> final_pops;  // in track order (tracks start energy-ordered)
};

// In place psi <- exp(-i H dt) psi. Compensated, scaled Taylor evaluation;
// accurate to ~1e-15 per step for ||H||*dt of order 1. t1/t2 are scratch.
void expm_apply(const CMat& H, double dt, CVec& psi, CVec& t1, CVec& t2);

// rho' = U rho U^dagger with U the midpoint-sampled time-ordered product of
// exp(-i H(t_k) dt). The density matrix is factored once into its spectral
// components and each is propagated as a state vector (exactly equivalent,
// much cheaper for low-rank states). `snap`, when set, is called before the
// first step, every `snap_stride` steps, and after the last one.
DensityMatrix propagate(
    const DensityMatrix& rho, const HamiltonianSampler& sampler,
    double duration, const PropagationConfig& cfg,
    const std::function<void(double, const std::vector<double>&,
                             const std::vector<CVec>&)>& snap = nullptr,
    int snap_stride = 0);

DensityMatrix hard_pulse(const DensityMatrix& rho, double angle_rad,
                         double phase_rad, int N = 6);

// The adiabatic conversion pulse. Offset schedule (sign discussion in the
// implementation): 0 -> -sweep_hz over [0, sweep_s], constant afterwards;
// amplitude constant until dur_s - ramp_s, then a half-cosine ramp to zero.
// When `report` is non-null the instantaneous-eigenbasis populations are
// tracked at ~50 snapshots.
DensityMatrix adiabatic_lock(const DensityMatrix& rho, const ClusterOps& ops,
                             const LockSegment& seg,
                             const PropagationConfig& cfg,
                             AdiabaticityReport* report = nullptr);

DensityMatrix gaussian_selective(const DensityMatrix& rho,
                                 const ClusterOps& ops,
                                 const GaussianSegment& seg,
                                 const PropagationConfig& cfg);

// Calibrated Gaussian peak amplitude (Hz) for a requested flip angle on a
// bare two-level transition: angle = 2 pi * peak * integral of the unit
// envelope over the truncated window.
double gaussian_peak_for_angle(double angle_rad, double dur_s);

// Exact zero-quantum projection: every element connecting different M_Z
// sectors is zeroed; diagonal and zero-quantum blocks are untouched. Equals
// the infinite-gradient limit of spatial-phase averaging; idempotent.
DensityMatrix gradient_dephase(const DensityMatrix& rho, int N = 6);

// Applies one parsed segment (Delay evolves under H_dip alone).
DensityMatrix apply_segment(const DensityMatrix& rho, const ClusterOps& ops,
                            const PulseSegment& seg,
                            const PropagationConfig& cfg,
                            AdiabaticityReport* lock_report = nullptr);

}  // namespace spinsim
