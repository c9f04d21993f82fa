#include "spinsim/pulse_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
}  // namespace

void expm_apply(const CMat& H, double dt, CVec& psi, CVec& t1, CVec& t2) {
  const int n = H.n;
  const auto& K = kernels::active();
  const double hnorm = inf_norm(H) * std::abs(dt);
  const int m = std::max(1, static_cast<int>(std::ceil(hnorm / 0.5)));
  const double s = dt / m;

  t1.resize(n);
  t2.resize(n);
  for (int sub = 0; sub < m; ++sub) {
    // acc (psi) += sum_k (-i s H)^k / k! psi ; term kept in t1/t2.
    std::copy(psi.begin(), psi.end(), t1.begin());
    double tnorm = 1.0;
    for (int k = 1; k <= 40; ++k) {
      K.matvec(H.a.data(), t1.data(), t2.data(), n);
      const cplx coef = cplx(0.0, -s / k);
      double nt = 0.0;
      for (int r = 0; r < n; ++r) {
        t1[r] = coef * t2[r];
        nt += std::norm(t1[r]);
      }
      K.axpy(1.0, t1.data(), psi.data(), n);
      tnorm = std::sqrt(nt);
      if (tnorm < 1e-17) break;
      if (k == 40)
        throw NumericalError("expm_apply: Taylor series did not converge");
    }
    if (!std::isfinite(tnorm))
      throw NumericalError("expm_apply: non-finite amplitudes");
  }
}

DensityMatrix propagate(
    const DensityMatrix& rho, const HamiltonianSampler& sampler,
    double duration, const PropagationConfig& cfg,
    const std::function<void(double, const std::vector<double>&,
                             const std::vector<CVec>&)>& snap,
    int snap_stride) {
  if (cfg.dt <= 0.0) throw ConfigError("propagate: dt must be positive");
  const int n = rho.rho.n;

  // Factor rho into spectral components once; each evolves as a state vector.
  EigenDecomposition ed = hermitian_eig(rho.rho);
  std::vector<double> weights;
  std::vector<CVec> vecs;
  for (int i = 0; i < n; ++i) {
    if (ed.eigenvalues[i] > 1e-14) {
      weights.push_back(ed.eigenvalues[i]);
      vecs.push_back(ed.column(i));
    } else if (ed.eigenvalues[i] < -1e-10) {
      throw NumericalError("propagate: input state is not positive");
    }
  }

  const long steps = std::max(1L, std::lround(std::ceil(duration / cfg.dt)));
  CMat H(n);
  CVec s1, s2;
  if (snap) snap(0.0, weights, vecs);
  for (long step = 0; step < steps; ++step) {
    const double t0 = step * cfg.dt;
    const double dt = std::min(cfg.dt, duration - t0);
    if (dt <= 0.0) break;
    sampler(t0 + 0.5 * dt, H);
    for (CVec& v : vecs) expm_apply(H, dt, v, s1, s2);
    if (snap && snap_stride > 0 && (step + 1) % snap_stride == 0 &&
        step + 1 < steps)
      snap(t0 + dt, weights, vecs);
  }
  if (snap) snap(duration, weights, vecs);

  CMat out(n);
  for (size_t k = 0; k < vecs.size(); ++k) {
    const CVec& v = vecs[k];
    const double w = weights[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) += w * v[i] * std::conj(v[j]);
  }
  return DensityMatrix{std::move(out)};
}

DensityMatrix hard_pulse(const DensityMatrix& rho, double angle_rad,
                         double phase_rad, int N) {
  CMat Sphi = collective_op(Axis::X, N);
  CMat sy = collective_op(Axis::Y, N);
  CMat gen(Sphi.n);
  add_scaled(gen, Sphi, std::cos(phase_rad));
  add_scaled(gen, sy, std::sin(phase_rad));
  CMat U = unitary_step(gen, angle_rad);
  return DensityMatrix{matmul(matmul(U, rho.rho), dagger(U))};
}

namespace {

// Shared lock schedule. The rotating-frame Hamiltonian is written with
// +2 pi offset S_Z; with that sign an offset swept toward NEGATIVE values
// tilts the effective field from +x toward +z, which is what maps the S_X
// ladder onto same-m eigenstates of H_dip. (Sweeping positive would tilt
// toward -z and land the distribution mirror-reversed.)
struct LockSchedule {
  const ClusterOps& ops;
  const LockSegment& seg;

  double offset_hz(double t) const {
    const double frac = seg.sweep_s > 0.0 ? std::min(t / seg.sweep_s, 1.0) : 1.0;
    return ops.base_offset_hz - seg.sweep_hz * frac;
  }
  double amp_hz(double t) const {
    const double t0 = seg.dur_s - seg.ramp_s;
    if (t <= t0 || seg.ramp_s <= 0.0) return seg.amp_hz;
    const double x = std::min((t - t0) / seg.ramp_s, 1.0);
    return seg.amp_hz * 0.5 * (1.0 + std::cos(kPi * x));
  }
  void assemble(double t, CMat& H) const {
    H = ops.hdip;
    add_scaled(H, ops.sz, kTwoPi * offset_hz(t));
    const double a = kTwoPi * amp_hz(t);
    add_scaled(H, ops.sx, -a * std::cos(seg.phase_rad));
    add_scaled(H, ops.sy, -a * std::sin(seg.phase_rad));
  }
};

// Instantaneous-eigenbasis population tracker for the adiabaticity report.
class LeakageTracker {
 public:
  LeakageTracker(const LockSchedule& sched, AdiabaticityReport& rep)
      : sched_(sched), rep_(rep) {}

  void operator()(double t, const std::vector<double>& w,
                  const std::vector<CVec>& vecs) {
    const int n = sched_.ops.hdip.n;
    CMat H(n);
    sched_.assemble(t, H);
    EigenDecomposition ed = hermitian_eig(H);

    // Track identity between snapshots: greedy maximum-overlap assignment.
    std::vector<int> track(n);
    if (!have_prev_) {
      for (int i = 0; i < n; ++i) track[i] = i;  // energy order at t = 0
    } else {
      CMat O = matmul(dagger(prev_basis_), ed.eigenvectors);
      std::vector<std::tuple<double, int, int>> cand;
      cand.reserve(static_cast<size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double ov = std::norm(O(i, j));
          if (ov > 1e-4) cand.emplace_back(ov, i, j);
        }
      std::sort(cand.begin(), cand.end(),
                [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
      std::vector<char> iused(n, 0), jused(n, 0);
      std::fill(track.begin(), track.end(), -1);
      for (const auto& [ov, i, j] : cand) {
        if (iused[i] || jused[j]) continue;
        track[j] = prev_track_[i];
        iused[i] = 1;
        jused[j] = 1;
      }
      for (int j = 0; j < n; ++j)
        if (track[j] < 0)
          for (int i = 0; i < n; ++i)
            if (!iused[i]) {
              track[j] = prev_track_[i];
              iused[i] = 1;
              break;
            }
    }

    std::vector<double> pops(n, 0.0);
    for (int j = 0; j < n; ++j) {
      const CVec chi = ed.column(j);
      double p = 0.0;
      for (size_t k = 0; k < vecs.size(); ++k)
        p += w[k] * std::norm(dotc(chi, vecs[k]));
      pops[track[j]] += p;
    }

    if (!have_prev_) {
      rep_.initial_pops = pops;
      have_prev_ = true;
    }
    double leak = 0.0;
    for (int i = 0; i < n; ++i)
      leak += std::abs(pops[i] - rep_.initial_pops[i]);
    leak *= 0.5;
    rep_.times.push_back(t);
    rep_.leakage.push_back(leak);
    rep_.max_leakage = std::max(rep_.max_leakage, leak);
    rep_.final_pops = std::move(pops);
    prev_basis_ = std::move(ed.eigenvectors);
    prev_track_ = std::move(track);
  }

 private:
  const LockSchedule& sched_;
  AdiabaticityReport& rep_;
  bool have_prev_ = false;
  CMat prev_basis_;
  std::vector<int> prev_track_;
};

}  // namespace

DensityMatrix adiabatic_lock(const DensityMatrix& rho, const ClusterOps& ops,
                             const LockSegment& seg,
                             const PropagationConfig& cfg,
                             AdiabaticityReport* report) {
  if (seg.dur_s < 0.0 || seg.sweep_s < 0.0 || seg.ramp_s < 0.0)
    throw ConfigError("adiabatic_lock: negative duration");
  if (seg.sweep_s + seg.ramp_s > seg.dur_s + 1e-12)
    throw ConfigError("adiabatic_lock: sweep_s + ramp_s exceeds dur_s");

  LockSchedule sched{ops, seg};
  HamiltonianSampler sampler = [&sched](double t, CMat& H) {
    sched.assemble(t, H);
  };

  if (!report) return propagate(rho, sampler, seg.dur_s, cfg);

  *report = AdiabaticityReport{};
  LeakageTracker tracker(sched, *report);
  const long steps =
      std::max(1L, std::lround(std::ceil(seg.dur_s / cfg.dt)));
  const int stride = static_cast<int>(std::max(1L, steps / 50));
  return propagate(
      rho, sampler, seg.dur_s, cfg,
      [&tracker](double t, const std::vector<double>& w,
                 const std::vector<CVec>& v) { tracker(t, w, v); },
      stride);
}

double gaussian_peak_for_angle(double angle_rad, double dur_s) {
  // integral of exp(-(t-T/2)^2 / 2 sigma^2) over [0, T], sigma = T/5
  const double sigma = dur_s / 5.0;
  const double integral =
      sigma * std::sqrt(kTwoPi) * std::erf(2.5 / std::sqrt(2.0));
  return angle_rad / (kTwoPi * integral);
}

DensityMatrix gaussian_selective(const DensityMatrix& rho,
                                 const ClusterOps& ops,
                                 const GaussianSegment& seg,
                                 const PropagationConfig& cfg) {
  if (seg.dur_s <= 0.0) throw ConfigError("gaussian_selective: dur_s <= 0");
  const double peak = seg.peak_amp_hz >= 0.0
                          ? seg.peak_amp_hz
                          : gaussian_peak_for_angle(seg.angle_rad, seg.dur_s);
  const double sigma = seg.dur_s / 5.0;
  const double tc = 0.5 * seg.dur_s;

  HamiltonianSampler sampler = [&, peak, sigma, tc](double t, CMat& H) {
    const double env = peak * std::exp(-0.5 * ((t - tc) / sigma) * ((t - tc) / sigma));
    const double ph = kTwoPi * seg.offset_hz * t;
    H = ops.hdip;
    add_scaled(H, ops.sx, -kTwoPi * env * std::cos(ph));
    add_scaled(H, ops.sy, -kTwoPi * env * std::sin(ph));
  };
  return propagate(rho, sampler, seg.dur_s, cfg);
}

DensityMatrix gradient_dephase(const DensityMatrix& rho, int N) {
  DensityMatrix out = rho;
  const int dim = out.rho.n;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (mz_of_basis_state(i, N) != mz_of_basis_state(j, N))
        out.rho(i, j) = 0.0;
  return out;
}

DensityMatrix apply_segment(const DensityMatrix& rho, const ClusterOps& ops,
                            const PulseSegment& seg,
                            const PropagationConfig& cfg,
                            AdiabaticityReport* lock_report) {
  if (const auto* lock = std::get_if<LockSegment>(&seg))
    return adiabatic_lock(rho, ops, *lock, cfg, lock_report);
  if (const auto* hard = std::get_if<HardSegment>(&seg))
    return hard_pulse(rho, hard->angle_rad, hard->phase_rad, ops.couplings.N);
  if (const auto* gauss = std::get_if<GaussianSegment>(&seg))
    return gaussian_selective(rho, ops, *gauss, cfg);
  if (std::get_if<GradientSegment>(&seg))
    return gradient_dephase(rho, ops.couplings.N);
  const auto& delay = std::get<DelaySegment>(seg);
  if (delay.dur_s <= 0.0) return rho;
  HamiltonianSampler sampler = [&ops](double, CMat& H) { H = ops.hdip; };
  return propagate(rho, sampler, delay.dur_s, cfg);
}

}  // namespace spinsim
