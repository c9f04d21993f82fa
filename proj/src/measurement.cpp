#include "spinsim/measurement.hpp"

#include "spinsim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace spinsim {

namespace {

std::string initial_label(int s, int mz) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "(%d,%+d)", s, mz);
  return buf;
}

std::vector<double> eigenbasis_populations(const DensityMatrix& rho,
                                           const EigenSystem& es) {
  std::vector<double> p(es.states.size());
  CVec tmp(static_cast<size_t>(rho.rho.n));
  for (size_t i = 0; i < es.states.size(); ++i) {
    matvec(rho.rho, es.states[i].vec, tmp);
    p[i] = std::real(dotc(es.states[i].vec, tmp));
  }
  return p;
}

int count_populated(const std::vector<double>& p, double thresh = 1e-3) {
  int n = 0;
  for (double x : p)
    if (x > thresh) ++n;
  return n;
}

void fill_theory_and_errors(MeasurementReport& rep, int s, int mz) {
  rep.theory = theory_distribution(s, mz);
  rep.sx2_theory = 0.5 * (s * (s + 1) - mz * mz);
  rep.sx2 = expectation_sx2(rep.distribution);
  rep.linf_error = 0.0;
  rep.linf_direct = 0.0;
  for (int m = -3; m <= 3; ++m) {
    rep.linf_error = std::max(
        rep.linf_error, std::abs(rep.distribution.at_m(m) - rep.theory.at_m(m)));
    rep.linf_direct =
        std::max(rep.linf_direct,
                 std::abs(rep.direct_distribution.at_m(m) - rep.theory.at_m(m)));
  }
}

}  // namespace

OutcomeDistribution theory_distribution(int s, int mz) {
  return wigner_rotation_probs(s, mz, std::numbers::pi / 2.0);
}

double expectation_sx2(const OutcomeDistribution& d) {
  double v = 0.0;
  for (int m = -3; m <= 3; ++m) v += static_cast<double>(m) * m * d.at_m(m);
  return v;
}

std::array<double, 7> populations_from_spectrum(
    const std::vector<StickEntry>& sample,
    const std::vector<StickEntry>& thermal, double total) {
  if (sample.size() != 6 || thermal.size() != 6)
    throw NumericalError("population inversion needs exactly six assigned peaks");
  for (int i = 0; i < 6; ++i) {
    if (sample[i].lo != thermal[i].lo || sample[i].hi != thermal[i].hi)
      throw NumericalError("missing peak assignment: sample and thermal "
                           "transitions do not match");
  }
  // Per-transition scale from the thermal reference; equal population
  // differences make it common across the ladder.
  double delta_bar = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (thermal[i].intensity == 0.0)
      throw NumericalError("zero thermal intensity for a high-spin transition");
    if (thermal[i].weight <= 0.0)
      throw NumericalError("non-positive transition weight");
    delta_bar += thermal[i].intensity / thermal[i].weight;
  }
  delta_bar /= 6.0;

  // Integrate population differences upward from M = -3, then fix the
  // additive constant by the known total.
  std::array<double, 7> q{};
  for (int i = 0; i < 6; ++i) {
    const double d = sample[i].intensity / thermal[i].intensity * delta_bar;
    q[static_cast<size_t>(i) + 1] = q[static_cast<size_t>(i)] + d;
  }
  double sum = 0.0;
  for (double x : q) sum += x;
  const double shift = (total - sum) / 7.0;
  for (double& x : q) x += shift;
  return q;
}

int resolve_initial(const EigenSystem& es, int s, int mz) {
  if (s != 3)
    throw ConfigError("only the S=3 high-spin family is addressable as (S,M)");
  if (mz < -3 || mz > 3) throw ConfigError("M must lie in -3..+3 for S=3");
  const std::array<int, 7> hs = highspin_states(es);
  return hs[mz + 3];
}

OutcomeDistribution invert_from_sticks(const DensityMatrix& rho,
                                       const ClusterOps& ops,
                                       const EigenSystem& es, double eps,
                                       double total) {
  const TransitionTable tt = transition_table(es);
  const std::array<int, 7> hs = highspin_states(es);
  const std::array<int, 6> hsix = highspin_transition_indices(tt, hs);
  const Spectrum sample = stick_spectrum(rho, es, tt);
  const DensityMatrix rho_th = thermal_equilibrium(eps, ops.couplings.N);
  const Spectrum reference = stick_spectrum(rho_th, es, tt);

  std::vector<StickEntry> samp6, ther6;
  for (int i = 0; i < 6; ++i) {
    samp6.push_back(sample.sticks[static_cast<size_t>(hsix[i])]);
    ther6.push_back(reference.sticks[static_cast<size_t>(hsix[i])]);
  }
  const std::array<double, 7> pops =
      populations_from_spectrum(samp6, ther6, total);
  OutcomeDistribution out;
  for (int m = -3; m <= 3; ++m) out.at_m(m) = pops[static_cast<size_t>(m + 3)];
  return out;
}

MeasurementReport measure_mx_oracle(int s, int mz) {
  MeasurementReport rep;
  rep.initial_label = initial_label(s, mz);
  rep.protocol = "oracle";
  rep.distribution = theory_distribution(s, mz);
  rep.direct_distribution = rep.distribution;
  fill_theory_and_errors(rep, s, mz);
  return rep;
}

MeasurementReport measure_mx_hardpulse(const ClusterOps& ops,
                                       const EigenSystem& es, int s, int mz) {
  MeasurementReport rep;
  rep.initial_label = initial_label(s, mz);
  rep.protocol = "hardpulse";

  const int idx = resolve_initial(es, s, mz);
  DensityMatrix rho = pseudopure(es, idx);

  // 90 degrees about -Y maps S_X statistics onto M_Z with the same sign.
  rho = hard_pulse(rho, std::numbers::pi / 2.0, 1.5 * std::numbers::pi,
                   ops.couplings.N);
  rho = gradient_dephase(rho, ops.couplings.N);

  const int dim = rho.rho.n;
  const int nspins = ops.couplings.N;
  for (int i = 0; i < dim; ++i) {
    const int m = mz_of_basis_state(i, nspins);
    rep.distribution.at_m(m) += std::real(rho.rho(i, i));
  }
  rep.direct_distribution = rep.distribution;

  rep.eigen_populations = eigenbasis_populations(rho, es);
  rep.populated_states = count_populated(rep.eigen_populations);
  const std::array<int, 7> hs = highspin_states(es);
  for (int m = -3; m <= 3; ++m)
    rep.highspin_total += rep.eigen_populations[static_cast<size_t>(hs[m + 3])];

  fill_theory_and_errors(rep, s, mz);
  return rep;
}

MeasurementReport measure_mx_adiabatic(const ClusterOps& ops,
                                       const EigenSystem& es, int s, int mz,
                                       const PropagationConfig& pcfg,
                                       const LockSegment& lock, double eps) {
  MeasurementReport rep;
  rep.initial_label = initial_label(s, mz);
  rep.protocol = "adiabatic";

  const int idx = resolve_initial(es, s, mz);
  DensityMatrix rho = pseudopure(es, idx);

  AdiabaticityReport adia;
  rho = adiabatic_lock(rho, ops, lock, pcfg, &adia);
  rep.max_leakage = adia.max_leakage;

  rep.eigen_populations = eigenbasis_populations(rho, es);
  rep.populated_states = count_populated(rep.eigen_populations);

  const std::array<int, 7> hs = highspin_states(es);
  for (int m = -3; m <= 3; ++m) {
    const double p = rep.eigen_populations[static_cast<size_t>(hs[m + 3])];
    rep.direct_distribution.at_m(m) = p;
    rep.highspin_total += p;
  }

  // Spectrum path: assigned sticks against a thermal reference.
  rep.distribution = invert_from_sticks(rho, ops, es, eps, 1.0);

  fill_theory_and_errors(rep, s, mz);
  return rep;
}

}  // namespace spinsim
