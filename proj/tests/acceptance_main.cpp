// Acceptance gate: ten end-to-end checks, one verdict line each, nonzero
// exit if any fails. Indented lines are supporting detail.
#include "spinsim/config.hpp"
#include "spinsim/measurement.hpp"
#include "test_helpers.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace spinsim;

namespace {

int failures = 0;

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

void verdict(int id, bool pass, const char* name, const std::string& detail,
             double secs) {
  if (!pass) ++failures;
  std::printf("C%-2d %s  %-28s %s  [%.2f s]\n", id, pass ? "PASS" : "FAIL",
              name, detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double linf(const OutcomeDistribution& d, const std::array<double, 7>& ref) {
  double e = 0.0;
  for (int i = 0; i < 7; ++i)
    e = std::max(e, std::abs(d.p[static_cast<size_t>(i)] -
                             ref[static_cast<size_t>(i)]));
  return e;
}

std::vector<StickEntry> highspin_sticks(const DensityMatrix& rho,
                                        const EigenSystem& es,
                                        const TransitionTable& tt) {
  const Spectrum sp = stick_spectrum(rho, es, tt);
  const std::array<int, 6> hsix =
      highspin_transition_indices(tt, highspin_states(es));
  std::vector<StickEntry> out;
  for (int i = 0; i < 6; ++i) {
    const Transition& tr =
        tt.entries[static_cast<size_t>(hsix[static_cast<size_t>(i)])];
    for (const StickEntry& st : sp.sticks)
      if (st.lo == tr.lo && st.hi == tr.hi) out.push_back(st);
  }
  return out;
}

void c1_oracle() {
  const double t0 = now_s();
  const double err = std::max(linf(theory_distribution(3, 3), th::kDist33),
                              linf(theory_distribution(3, 2), th::kDist32));
  const double dt = now_s() - t0;
  verdict(1, err <= 1e-12 && dt < 1.0, "outcome distributions",
          fmt("max|err|=%.3g bound=1e-12", err), dt);
}

void c2_sx2() {
  const double t0 = now_s();
  double err = 0.0;
  for (int m = -3; m <= 3; ++m)
    err = std::max(err, std::abs(expectation_sx2(theory_distribution(3, m)) -
                                 0.5 * (12.0 - m * m)));
  verdict(2, err <= 1e-12, "transverse second moment",
          fmt("max|err|=%.3g bound=1e-12", err), now_s() - t0);
}

void c3_effective_spins() {
  const double t0 = now_s();
  double box_err = 0.0;    // distance from the nominal values
  double scale_dev = 0.0;  // cross-scale disagreement
  std::array<double, 3> ref{};  // s_eff at M=-1,0,+1 for the first scale
  bool first = true;
  for (double b : {1400.0, 420.0}) {
    const EigenSystem es =
        classify_eigenstates(make_cluster_ops(benzene_couplings(b)));
    const std::array<int, 7> hs = highspin_states(es);
    for (int i = 0; i < 3; ++i) {
      const int m = i - 1;  // -1, 0, +1
      const double se = es.states[static_cast<size_t>(hs[m + 3])].s_eff;
      const double nominal = (m == 0) ? 2.59 : 2.78;
      box_err = std::max(box_err, std::abs(se - nominal));
      if (first)
        ref[static_cast<size_t>(i)] = se;
      else
        scale_dev =
            std::max(scale_dev, std::abs(se - ref[static_cast<size_t>(i)]));
    }
    first = false;
  }
  const double dt = now_s() - t0;
  verdict(3, box_err <= 0.02 && scale_dev <= 1e-6 && dt < 5.0,
          "effective spins",
          fmt("max|s_eff-nominal|=%.4f bound=0.02 scale_dev=%.2g", box_err,
              scale_dev),
          dt);
}

void c4_spin_waves() {
  const double t0 = now_s();
  const EigenSystem& es = th::es6();
  int n12 = 0, n6 = 0, bad_k = 0;
  double band_err = 0.0;
  for (int m : {-2, 2}) {
    for (int idx : es.sector(m)) {
      const EigenState& st = es.states[static_cast<size_t>(idx)];
      if (std::abs(st.s_squared - 12.0) <= 1e-6) {
        ++n12;
        if (st.k != 0) ++bad_k;
        band_err = std::max(band_err, std::abs(st.s_squared - 12.0));
      } else if (std::abs(st.s_squared - 6.0) <= 1e-6) {
        ++n6;
        if (st.k == 0) ++bad_k;
        band_err = std::max(band_err, std::abs(st.s_squared - 6.0));
      }
    }
  }
  verdict(4, n12 == 2 && n6 == 10 && bad_k == 0, "spin-wave band",
          fmt("split=%d+%d want 2+10, k mislabels=%d, max|S2 err|=%.2g", n12,
              n6, bad_k, band_err),
          now_s() - t0);
}

void c5_adiabatic() {
  const ClusterOps& ops = th::ops6();
  const EigenSystem& es = th::es6();
  double worst_linf = 0.0, worst_leak = 0.0, worst_t = 0.0;
  for (int mz : {3, 2}) {
    const double t0 = now_s();
    const MeasurementReport rep = measure_mx_adiabatic(ops, es, 3, mz);
    const double secs = now_s() - t0;
    std::printf("      (3,%d): Linf=%.4f leakage=%.4f direct=%.4f [%.1f s]\n",
                mz, rep.linf_error, rep.max_leakage, rep.linf_direct, secs);
    std::fflush(stdout);
    worst_linf = std::max(worst_linf, rep.linf_error);
    worst_leak = std::max(worst_leak, rep.max_leakage);
    worst_t = std::max(worst_t, secs);
  }
  verdict(5,
          worst_linf <= 0.02 && worst_leak <= 0.02 && worst_t <= 120.0,
          "adiabatic protocol",
          fmt("max Linf=%.4f bound=0.02, max leakage=%.4f bound=0.02",
              worst_linf, worst_leak),
          worst_t);
}

void c6_hardpulse() {
  // Exactness is claimed for initial (3,3): the aligned state is an exact
  // S=3 multiplet member, so the 90-degree rotation statistics are analytic.
  const double t0 = now_s();
  const ClusterOps& ops = th::ops6();
  const EigenSystem& es = th::es6();
  const MeasurementReport rep = measure_mx_hardpulse(ops, es, 3, 3);
  const MeasurementReport want = measure_mx_oracle(3, 3);
  const double err = linf(rep.distribution, want.distribution.p);
  verdict(6, err <= 1e-10 && rep.populated_states > 7, "hard-pulse protocol",
          fmt("|err|=%.3g bound=1e-10, populated(3,3)=%d want >7", err,
              rep.populated_states),
          now_s() - t0);
}

void c7_roundtrip() {
  const double t0 = now_s();
  const EigenSystem& es = th::es6();
  const std::array<int, 7> hs = highspin_states(es);
  const TransitionTable tt = transition_table(es);
  const std::vector<StickEntry> thermal =
      highspin_sticks(thermal_equilibrium(0.1), es, tt);

  std::mt19937 gen(0xacce97u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::array<double, 7> q{};
    double s = 0.0;
    for (double& x : q) s += (x = u(gen));
    for (double& x : q) x /= s;

    DensityMatrix rho;
    rho.rho = CMat(64);
    for (int m = 0; m < 7; ++m) {
      const CVec& v = es.states[static_cast<size_t>(hs[m])].vec;
      CMat proj = outer(v, v);
      add_scaled(rho.rho, proj, q[static_cast<size_t>(m)]);
    }
    const std::array<double, 7> rec = populations_from_spectrum(
        highspin_sticks(rho, es, tt), thermal, 1.0);
    for (int i = 0; i < 7; ++i)
      err = std::max(err, std::abs(rec[static_cast<size_t>(i)] -
                                   q[static_cast<size_t>(i)]));
  }
  verdict(7, err <= 1e-6, "spectrum inversion round-trip",
          fmt("max|err|=%.3g bound=1e-6 over 100 states", err), now_s() - t0);
}

void c8_thermal() {
  const double t0 = now_s();
  const EigenSystem& es = th::es6();
  const TransitionTable tt = transition_table(es);
  const std::vector<StickEntry> sticks =
      highspin_sticks(thermal_equilibrium(0.1), es, tt);
  double lo = 1e300, hi = -1e300;
  for (const StickEntry& st : sticks) {
    const double r = st.intensity / st.weight;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double spread = (hi - lo) / hi;
  verdict(8, sticks.size() == 6 && spread <= 1e-9, "thermal stick weights",
          fmt("rel spread=%.3g bound=1e-9", spread), now_s() - t0);
}

void c9_hygiene() {
  const double t0 = now_s();
  const ClusterOps& ops = th::ops6();
  const EigenSystem& es = th::es6();
  const DensityMatrix rho0 = pseudopure(es, highspin_states(es)[6]);

  LockSegment seg;  // scaled-down schedule, same shape
  seg.dur_s = 2.5e-3;
  seg.sweep_s = 2.0e-3;
  seg.ramp_s = 0.5e-3;

  const DensityMatrix a =
      adiabatic_lock(rho0, ops, seg, PropagationConfig{0.5e-6, 1e-4});
  const double trace_drift = std::abs(trace(a.rho) - cplx(1.0, 0.0));
  const EigenDecomposition ed = hermitian_eig(a.rho);
  double eig_drift = 0.0;  // pure in, pure out: spectrum {0,...,0,1}
  for (int i = 0; i < 63; ++i)
    eig_drift =
        std::max(eig_drift, std::abs(ed.eigenvalues[static_cast<size_t>(i)]));
  eig_drift = std::max(eig_drift, std::abs(ed.eigenvalues[63] - 1.0));

  const DensityMatrix b =
      adiabatic_lock(rho0, ops, seg, PropagationConfig{0.25e-6, 1e-4});
  const std::array<int, 7> hs = highspin_states(es);
  double halving = 0.0;
  for (int m = 0; m < 7; ++m) {
    const CVec& v = es.states[static_cast<size_t>(hs[m])].vec;
    const double pa = dotc(v, matvec(a.rho, v)).real();
    const double pb = dotc(v, matvec(b.rho, v)).real();
    halving = std::max(halving, std::abs(pa - pb));
  }

  const DensityMatrix r = th::random_density(64);
  const DensityMatrix g1 = gradient_dephase(r);
  const DensityMatrix g2 = gradient_dephase(g1);
  const double idem = max_abs(sub(g2.rho, g1.rho));

  verdict(9,
          trace_drift <= 1e-9 && eig_drift <= 1e-9 && halving <= 1e-4 &&
              idem == 0.0,
          "numerical hygiene",
          fmt("trace=%.2g eig=%.2g bound=1e-9, dt-halving=%.2g bound=1e-4, "
              "idempotence=%.1g want 0",
              trace_drift, eig_drift, halving, idem),
          now_s() - t0);
}

void c10_selective() {
  const double t0 = now_s();
  const ClusterOps& ops = th::ops6();
  const EigenSystem& es = th::es6();
  const std::array<int, 7> hs = highspin_states(es);
  const EigenState& s33 = es.states[static_cast<size_t>(hs[6])];
  const EigenState& s32 = es.states[static_cast<size_t>(hs[5])];

  GaussianSegment seg;  // 30 ms, 15 Hz peak
  seg.offset_hz = (s33.energy - s32.energy) / (2.0 * std::numbers::pi);
  const DensityMatrix rho0 = pseudopure(es, hs[6]);
  const DensityMatrix out =
      gaussian_selective(rho0, ops, seg, PropagationConfig{});

  // fidelity with the pure target state
  const double pop = dotc(s32.vec, matvec(out.rho, s32.vec)).real();
  const double overlap = std::sqrt(std::max(0.0, pop));
  double other = 0.0;  // population drift outside the two pulsed levels
  for (int m = -3; m <= 3; ++m) {
    if (m == 3 || m == 2) continue;
    const CVec& v = es.states[static_cast<size_t>(hs[m + 3])].vec;
    const double before = dotc(v, matvec(rho0.rho, v)).real();
    const double after = dotc(v, matvec(out.rho, v)).real();
    other = std::max(other, std::abs(after - before));
  }
  verdict(10, overlap >= 0.98 && other < 0.02, "selective pulse",
          fmt("overlap=%.4f bound>=0.98, max other drift=%.4f bound<0.02",
              overlap, other),
          now_s() - t0);
}

}  // namespace

int main() {
  std::printf("acceptance suite: 6-spin cluster, b_ortho=1400 Hz default\n");
  c1_oracle();
  c2_sx2();
  c3_effective_spins();
  c4_spin_waves();
  c5_adiabatic();
  c6_hardpulse();
  c7_roundtrip();
  c8_thermal();
  c9_hygiene();
  c10_selective();
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
