#include "spinsim/spectroscopy.hpp"

#include "spinsim/eigen.hpp"
#include "spinsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spinsim {

namespace {

constexpr double kWeightFloor = 1e-12;

// S+ = sum_k S_k+ applied in the product basis: clearing bit (k-1) raises
// spin k from down to up with unit amplitude.
CVec apply_splus(const CVec& v, int nspins) {
  const int dim = static_cast<int>(v.size());
  CVec out(dim, cplx(0.0, 0.0));
  for (int i = 0; i < dim; ++i) {
    if (v[i] == cplx(0.0, 0.0)) continue;
    for (int k = 0; k < nspins; ++k) {
      const int mask = 1 << k;
      if (i & mask) out[i & ~mask] += v[i];
    }
  }
  return out;
}

int nspins_of_dim(int dim) {
  int n = 0;
  while ((1 << n) < dim) ++n;
  return n;
}

// diag of V^dag rho V, i.e. populations in the eigenbasis.
std::vector<double> eigen_populations(const DensityMatrix& rho,
                                      const EigenSystem& es) {
  const int dim = rho.rho.n;
  std::vector<double> p(es.states.size());
  CVec tmp(dim);
  for (size_t i = 0; i < es.states.size(); ++i) {
    matvec(rho.rho, es.states[i].vec, tmp);
    p[i] = std::real(dotc(es.states[i].vec, tmp));
  }
  return p;
}

// In-place radix-2 Cooley-Tukey, kernel e^{-2 pi i j n / N}.
void fft_forward(std::vector<cplx>& x) {
  const size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ConfigError("fft size must be a power of two");
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Quadratic through (-1,ym),(0,y0),(+1,yp) evaluated at d.
double parabola_at(double ym, double y0, double yp, double d) {
  const double b = 0.5 * (yp - ym);
  const double c = 0.5 * (yp - 2.0 * y0 + ym);
  return y0 + b * d + c * d * d;
}

double parabola_vertex(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (std::abs(denom) < 1e-300) return 0.0;
  double d = 0.5 * (ym - yp) / denom;
  return std::clamp(d, -0.5, 0.5);
}

}  // namespace

TransitionTable transition_table(const EigenSystem& es) {
  TransitionTable tt;
  const int n = static_cast<int>(es.states.size());
  if (n == 0) return tt;
  const int nspins = nspins_of_dim(static_cast<int>(es.states[0].vec.size()));
  // Cache S+ |lo> per state; matrix elements against every hi in M+1.
  for (int lo = 0; lo < n; ++lo) {
    const int m = es.states[lo].mz;
    if (m >= nspins / 2 + (nspins & 1)) continue;
    CVec raised = apply_splus(es.states[lo].vec, nspins);
    for (int hi = 0; hi < n; ++hi) {
      if (es.states[hi].mz != m + 1) continue;
      const cplx amp = dotc(es.states[hi].vec, raised);
      const double w = std::norm(amp);
      if (w <= kWeightFloor) continue;
      Transition t;
      t.lo = lo;
      t.hi = hi;
      t.mz_lo = m;
      t.freq_hz =
          (es.states[hi].energy - es.states[lo].energy) / (2.0 * std::numbers::pi);
      t.weight = w;
      tt.entries.push_back(t);
    }
  }
  return tt;
}

std::array<int, 6> highspin_transition_indices(const TransitionTable& tt,
                                               const std::array<int, 7>& hs) {
  std::array<int, 6> out{};
  for (int m = -3; m <= 2; ++m) {
    const int lo = hs[m + 3];
    const int hi = hs[m + 4];
    int found = -1;
    for (size_t i = 0; i < tt.entries.size(); ++i) {
      if (tt.entries[i].lo == lo && tt.entries[i].hi == hi) {
        found = static_cast<int>(i);
        break;
      }
    }
    if (found < 0)
      throw NumericalError("high-spin transition missing from transition table");
    out[m + 3] = found;
  }
  return out;
}

Spectrum stick_spectrum(const DensityMatrix& rho, const EigenSystem& es,
                        const TransitionTable& tt) {
  Spectrum spec;
  const std::vector<double> p = eigen_populations(rho, es);
  spec.sticks.reserve(tt.entries.size());
  for (const Transition& t : tt.entries) {
    StickEntry s;
    s.lo = t.lo;
    s.hi = t.hi;
    s.freq_hz = t.freq_hz;
    s.weight = t.weight;
    s.intensity = (p[t.hi] - p[t.lo]) * t.weight;
    spec.sticks.push_back(s);
  }
  return spec;
}

Spectrum fid_spectrum(const DensityMatrix& rho, const EigenSystem& es,
                      const ClusterOps& ops, const TransitionTable& tt,
                      const AcquireParams& acq) {
  if (acq.points < 2 || (acq.points & (acq.points - 1)) != 0)
    throw ConfigError("acquisition points must be a power of two >= 2");
  if (acq.dwell_s <= 0.0) throw ConfigError("dwell time must be positive");
  if (acq.broadening_hz < 0.0)
    throw ConfigError("line broadening must be non-negative");

  const int dim = rho.rho.n;
  const int n = static_cast<int>(es.states.size());
  const int nspins = nspins_of_dim(dim);

  // Reading pulse: small rotation about Y.
  const double theta = acq.read_angle_deg * std::numbers::pi / 180.0;
  const CMat r = unitary_step(ops.sy, theta);
  CMat rot = matmul(matmul(r, rho.rho), dagger(r));

  // Eigenbasis transform of the rotated state and of S+.
  CMat v(dim);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i) v(i, j) = es.states[j].vec[i];
  const CMat vd = dagger(v);
  const CMat rho_e = matmul(vd, matmul(rot, v));

  CMat splus_e(dim);
  for (int a = 0; a < n; ++a) {
    CVec raised = apply_splus(es.states[a].vec, nspins);
    for (int b = 0; b < n; ++b) {
      if (es.states[b].mz != es.states[a].mz + 1) continue;
      splus_e(b, a) = dotc(es.states[b].vec, raised);
    }
  }

  // s(t) = sum over single-quantum pairs of rho~_{ab} S+~_{ba} e^{+i w_ba t},
  // damped by the broadening envelope. Each term advances by a fixed complex
  // factor per dwell, so the whole FID is a few hundred geometric series.
  struct Term {
    cplx c;
    cplx z;
  };
  std::vector<Term> terms;
  const double lambda = acq.broadening_hz;  // Lorentzian FWHM in Hz
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (es.states[b].mz != es.states[a].mz + 1) continue;
      const cplx sp = splus_e(b, a);
      if (std::abs(sp) < 1e-14) continue;
      const cplx c0 = rho_e(a, b) * sp;
      if (std::abs(c0) < 1e-18) continue;
      const double w = es.states[b].energy - es.states[a].energy;
      const cplx ez = std::exp(
          cplx(-std::numbers::pi * lambda * acq.dwell_s, w * acq.dwell_s));
      terms.push_back({c0, ez});
    }
  }

  std::vector<cplx> sig(static_cast<size_t>(acq.points), cplx(0.0, 0.0));
  for (Term& t : terms) {
    cplx c = t.c;
    for (int i = 0; i < acq.points; ++i) {
      sig[static_cast<size_t>(i)] += c;
      c *= t.z;
    }
  }

  fft_forward(sig);

  Spectrum spec;
  spec.meta = acq;
  const int np = acq.points;
  const double df = 1.0 / (static_cast<double>(np) * acq.dwell_s);
  spec.freq_hz.resize(static_cast<size_t>(np));
  spec.amp.resize(static_cast<size_t>(np));
  for (int j = 0; j < np; ++j) {
    spec.freq_hz[static_cast<size_t>(j)] = (j - np / 2) * df;
    spec.amp[static_cast<size_t>(j)] =
        sig[static_cast<size_t>((j + np / 2) % np)];
  }

  const double nyquist = 0.5 / acq.dwell_s;
  for (const Transition& t : tt.entries) {
    if (t.weight > kWeightFloor && std::abs(t.freq_hz) > nyquist) {
      spec.aliasing_warning = true;
      break;
    }
  }
  return spec;
}

std::vector<Peak> peak_pick(const Spectrum& spec) {
  std::vector<Peak> peaks;
  const size_t n = spec.amp.size();
  if (n < 3) return peaks;
  std::vector<double> mag(n);
  for (size_t i = 0; i < n; ++i) mag[i] = std::abs(spec.amp[i]);
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  const double thresh = 3.0 * median;
  const double df = spec.freq_hz[1] - spec.freq_hz[0];
  for (size_t j = 1; j + 1 < n; ++j) {
    if (mag[j] <= thresh) continue;
    if (!(mag[j] >= mag[j - 1] && mag[j] > mag[j + 1])) continue;
    const double d = parabola_vertex(mag[j - 1], mag[j], mag[j + 1]);
    Peak p;
    p.freq_hz = spec.freq_hz[j] + d * df;
    p.amplitude = parabola_at(std::real(spec.amp[j - 1]), std::real(spec.amp[j]),
                              std::real(spec.amp[j + 1]), d);
    peaks.push_back(p);
  }
  return peaks;
}

double signed_amplitude_near(const Spectrum& spec, double freq_hz,
                             double window_hz) {
  const size_t n = spec.amp.size();
  if (n < 3) throw ConfigError("sampled spectrum required");
  const double df = spec.freq_hz[1] - spec.freq_hz[0];
  long j0 = std::lround((freq_hz - spec.freq_hz[0]) / df);
  j0 = std::clamp(j0, 1L, static_cast<long>(n) - 2);
  const long w = std::max(1L, std::lround(std::ceil(window_hz / df)));
  const long lo = std::max(1L, j0 - w);
  const long hi = std::min(static_cast<long>(n) - 2, j0 + w);
  long best = j0;
  double best_mag = -1.0;
  for (long j = lo; j <= hi; ++j) {
    const double m = std::abs(std::real(spec.amp[static_cast<size_t>(j)]));
    if (m > best_mag) {
      best_mag = m;
      best = j;
    }
  }
  const double ym = std::real(spec.amp[static_cast<size_t>(best - 1)]);
  const double y0 = std::real(spec.amp[static_cast<size_t>(best)]);
  const double yp = std::real(spec.amp[static_cast<size_t>(best + 1)]);
  // Refine only when the chosen bin is a genuine local extremum of Re.
  if ((std::abs(y0) >= std::abs(ym) && std::abs(y0) >= std::abs(yp))) {
    const double d = parabola_vertex(std::abs(ym), std::abs(y0), std::abs(yp));
    return parabola_at(ym, y0, yp, d);
  }
  return y0;
}

}  // namespace spinsim
