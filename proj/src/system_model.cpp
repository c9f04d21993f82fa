#include "spinsim/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSites = 6;
}  // namespace

std::vector<int> EigenSystem::sector(int mz) const {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i].mz == mz) idx.push_back(i);
  return idx;
}

CouplingSet benzene_couplings(double b_ortho_hz) {
  CouplingSet c;
  c.N = kSites;
  c.b.assign(kSites * kSites, 0.0);
  for (int j = 0; j < kSites; ++j) {
    for (int k = 0; k < kSites; ++k) {
      if (j == k) continue;
      const int d = std::abs(j - k);
      const int sep = std::min(d, kSites - d);  // 1 ortho, 2 meta, 3 para
      double factor = 1.0;
      if (sep == 2) factor = std::pow(3.0, -1.5);  // (sqrt(3))^-3
      if (sep == 3) factor = 0.125;                // 2^-3
      c.at(j, k) = kTwoPi * b_ortho_hz * factor;
    }
  }
  return c;
}

CMat dipolar_hamiltonian(const CouplingSet& c) {
  const int dim = 1 << c.N;
  CMat H(dim);
  for (int j = 0; j < c.N; ++j) {
    for (int k = j + 1; k < c.N; ++k) {
      const double b = c.at(j, k);
      if (b == 0.0) continue;
      const int mj = 1 << j, mk = 1 << k;
      for (int i = 0; i < dim; ++i) {
        const bool same = ((i & mj) != 0) == ((i & mk) != 0);
        // S_kZ S_jZ contributes (+-1/2)(+-1/2) on the diagonal; the
        // -1/2(S_X S_X + S_Y S_Y) flip-flop moves amplitude -b/4 between the
        // two antiparallel configurations.
        H(i, i) += same ? 0.25 * b : -0.25 * b;
        if (!same) H(i ^ (mj | mk), i) -= 0.25 * b;
      }
    }
  }
  return H;
}

CMat rotating_frame_hamiltonian(const CouplingSet& c, double offset_hz,
                                double amp_hz, double phase_rad) {
  CMat H = dipolar_hamiltonian(c);
  add_scaled(H, collective_op(Axis::Z, c.N), kTwoPi * offset_hz);
  add_scaled(H, collective_op(Axis::X, c.N), -kTwoPi * amp_hz * std::cos(phase_rad));
  add_scaled(H, collective_op(Axis::Y, c.N), -kTwoPi * amp_hz * std::sin(phase_rad));
  return H;
}

CMat cyclic_shift_op(int N) {
  const int dim = 1 << N;
  CMat P(dim);
  for (int i = 0; i < dim; ++i) {
    int to = 0;
    for (int b = 0; b < N; ++b)
      if (i & (1 << b)) to |= 1 << ((b + 1) % N);
    P(to, i) = 1.0;
  }
  return P;
}

ClusterOps make_cluster_ops(const CouplingSet& c) {
  ClusterOps ops;
  ops.couplings = c;
  ops.hdip = dipolar_hamiltonian(c);
  ops.sx = collective_op(Axis::X, c.N);
  ops.sy = collective_op(Axis::Y, c.N);
  ops.sz = collective_op(Axis::Z, c.N);
  ops.s2 = total_spin_squared(c.N);
  ops.shift = cyclic_shift_op(c.N);
  return ops;
}

ClusterOps make_cluster_ops(const ClusterConfig& cfg) {
  ClusterOps ops = make_cluster_ops(benzene_couplings(cfg.b_ortho_hz));
  ops.base_offset_hz = cfg.offset_hz;
  return ops;
}

namespace {

// Wavenumber from the shift-operator expectation value; -1 when |<P>| is not
// on the unit circle (state not a sharp P eigenvector).
int wavenumber_label(const CMat& P, const CVec& v, int N) {
  CVec Pv = matvec(P, v);
  const cplx z = dotc(v, Pv);
  if (std::abs(std::abs(z) - 1.0) > 1e-6) return -1;
  const double step = kTwoPi / N;
  int k = static_cast<int>(std::lround(std::arg(z) / step));
  return ((k % N) + N) % N;
}

}  // namespace

EigenSystem classify_eigenstates(const ClusterOps& ops) {
  const CMat& H = ops.hdip;
  const int N = ops.couplings.N;
  const int dim = H.n;
  const double scale = std::max(1.0, max_abs(H));

  // The secular Hamiltonian must not mix M_Z sectors.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (mz_of_basis_state(i, N) != mz_of_basis_state(j, N) &&
          std::abs(H(i, j)) > 1e-9 * scale)
        throw NumericalError("classify_eigenstates: M_Z sector mixing");

  EigenSystem es;
  for (int mz = -N / 2; mz <= N / 2; ++mz) {
    // Collect the product states of this sector and diagonalize the block.
    std::vector<int> basis;
    for (int i = 0; i < dim; ++i)
      if (mz_of_basis_state(i, N) == mz) basis.push_back(i);
    const int nb = static_cast<int>(basis.size());

    CMat block(nb);
    for (int r = 0; r < nb; ++r)
      for (int s = 0; s < nb; ++s) block(r, s) = H(basis[r], basis[s]);
    EigenDecomposition ed = hermitian_eig(block);

    // Embed the sector eigenvectors back into the full space.
    std::vector<CVec> vecs(nb, CVec(dim, 0.0));
    for (int i = 0; i < nb; ++i)
      for (int r = 0; r < nb; ++r) vecs[i][basis[r]] = ed.eigenvectors(r, i);

    // Stabilize degenerate levels with the shift operator: inside each group
    // diagonalize a generic Hermitian combination of (G+G^+)/2 and
    // (G-G^+)/2i, G = V^+ P V, whose eigenvalues cos(2 pi k/N) + kappa
    // sin(2 pi k/N) separate all wavenumbers.
    const double emax = std::max(std::abs(ed.eigenvalues.front()),
                                 std::abs(ed.eigenvalues.back()));
    const double etol = 1e-8 * std::max(1.0, emax);
    int g0 = 0;
    while (g0 < nb) {
      int g1 = g0 + 1;
      while (g1 < nb && ed.eigenvalues[g1] - ed.eigenvalues[g1 - 1] <= etol)
        ++g1;
      const int g = g1 - g0;
      if (g > 1) {
        CMat G(g);
        std::vector<CVec> Pv(g);
        for (int a = 0; a < g; ++a) Pv[a] = matvec(ops.shift, vecs[g0 + a]);
        for (int a = 0; a < g; ++a)
          for (int b = 0; b < g; ++b) G(a, b) = dotc(vecs[g0 + a], Pv[b]);
        constexpr double kappa = 0.3777001;  // generic mixing weight
        CMat Hmix(g);
        for (int a = 0; a < g; ++a)
          for (int b = 0; b < g; ++b) {
            const cplx gs = G(a, b), gc = std::conj(G(b, a));
            Hmix(a, b) = 0.5 * (gs + gc) +
                         kappa * cplx(0.0, -0.5) * (gs - gc);
          }
        EigenDecomposition gd = hermitian_eig(Hmix);
        std::vector<CVec> rotated(g, CVec(dim, 0.0));
        for (int a = 0; a < g; ++a)
          for (int b = 0; b < g; ++b) {
            const cplx w = gd.eigenvectors(b, a);
            if (w != cplx(0.0))
              for (int r = 0; r < dim; ++r) rotated[a][r] += w * vecs[g0 + b][r];
          }
        for (int a = 0; a < g; ++a) vecs[g0 + a] = std::move(rotated[a]);
      }
      g0 = g1;
    }

    for (int i = 0; i < nb; ++i) {
      EigenState st;
      st.energy = ed.eigenvalues[i];
      st.mz = mz;
      st.vec = std::move(vecs[i]);
      st.s_squared = expval(ops.s2, st.vec);
      st.s_eff = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * st.s_squared));
      st.k = wavenumber_label(ops.shift, st.vec, N);
      es.states.push_back(std::move(st));
    }
  }

  // Sanity: every state sharp in M_Z by construction; verify sector sizes.
  for (int mz = -N / 2; mz <= N / 2; ++mz) {
    const auto idx = es.sector(mz);
    int expect = 1;
    {
      // C(N, N/2 + mz)
      const int kk = N / 2 + mz;
      long c = 1;
      for (int t = 0; t < kk; ++t) c = c * (N - t) / (t + 1);
      expect = static_cast<int>(c);
    }
    if (static_cast<int>(idx.size()) != expect)
      throw NumericalError("classify_eigenstates: wrong sector size");
  }
  return es;
}

std::array<int, 7> highspin_states(const EigenSystem& es) {
  std::array<int, 7> out{};
  for (int mz = -3; mz <= 3; ++mz) {
    const auto idx = es.sector(mz);
    if (idx.empty()) throw NumericalError("highspin_states: missing sector");
    // States are energy-ordered within the sector; check for a degenerate
    // minimum and break ties deterministically toward the smallest k label.
    int best = idx[0];
    if (idx.size() > 1) {
      const double e0 = es.states[idx[0]].energy;
      const double tol = 1e-8 * std::max(1.0, std::abs(e0));
      for (size_t t = 1; t < idx.size(); ++t) {
        if (es.states[idx[t]].energy - e0 > tol) break;
        const int kb = es.states[best].k, kt = es.states[idx[t]].k;
        if (kt >= 0 && (kb < 0 || kt < kb)) best = idx[t];
      }
    }
    out[mz + 3] = best;
  }
  return out;
}

std::vector<SpinWaveLabel> classify_spin_waves(const EigenSystem& es) {
  std::vector<SpinWaveLabel> out;
  for (int mz : {-2, 2})
    for (int i : es.sector(mz))
      out.push_back({mz, es.states[i].k, es.states[i].s_eff});
  return out;
}

}  // namespace spinsim
