#pragma once
#include "spinsim/spin_algebra.hpp"

#include <string>
#include <vector>

// The six-spin ring: residual dipolar couplings on a regular hexagon, the
// secular dipolar Hamiltonian, and the eigenstate classification (sector,
// effective spin, cyclic wavenumber) that the measurement protocols rely on.
namespace spinsim {

struct CouplingSet {
  int N = 6;
  std::vector<double> b;  // rad/s, row-major N x N, symmetric, zero diagonal

  double& at(int j, int k) { return b[static_cast<size_t>(j) * N + k]; }
  double at(int j, int k) const { return b[static_cast<size_t>(j) * N + k]; }
};

struct ClusterConfig {
  // Sign matters: with the positive sign the lowest-energy state of each M_Z
  // sector is the high-spin one (effective spins 2.78 / 2.59), which is the
  // regime the measurement protocols assume. The magnitude is a free scale.
  double b_ortho_hz = 1400.0;
  double offset_hz = 0.0;
  int N = 6;
};

struct EigenState {
  double energy = 0.0;    // rad/s
  int mz = 0;             // sharp sector label
  double s_squared = 0.0; // <S^2>
  double s_eff = 0.0;     // solves s(s+1) = <S^2>
  int k = -1;             // cyclic wavenumber 0..5, or -1 when not sharp
  CVec vec;               // amplitudes in the product basis
};

struct EigenSystem {
  std::vector<EigenState> states;  // sorted by (mz ascending, energy ascending)
  std::string notes;               // classification warnings, if any

  // Indices of one sector, in energy order.
  std::vector<int> sector(int mz) const;
};

// Hexagon couplings from the r^-3 law: r_meta = sqrt(3) r_ortho, r_para = 2
// r_ortho, so b_ortho : b_meta : b_para = 1 : 3^(-3/2) : 1/8. Input in Hz,
// stored in rad/s.
CouplingSet benzene_couplings(double b_ortho_hz);

// H_dip = sum_{k>j} b_jk { S_kZ S_jZ - 1/2 S_kX S_jX - 1/2 S_kY S_jY }.
// Commutes with S_Z (secular form); traceless.
CMat dipolar_hamiltonian(const CouplingSet& c);

// H = 2 pi offset S_Z + H_dip - 2 pi amp (S_X cos(phase) + S_Y sin(phase)).
// offset and amp in Hz, phase in rad.
CMat rotating_frame_hamiltonian(const CouplingSet& c, double offset_hz,
                                double amp_hz, double phase_rad);

// Cyclic shift permutation: site j -> j+1 (mod N). Commutes with H_dip on the
// ring geometry; its eigenphases exp(2 pi i k / N) define the wavenumber k.
CMat cyclic_shift_op(int N);

// Cached operators for one cluster, shared read-only by the engines.
struct ClusterOps {
  CouplingSet couplings;
  CMat hdip, sx, sy, sz, s2, shift;
  // Static resonance offset (Hz) added to the swept offset of lock segments;
  // the free-evolution spectrum is reported relative to the carrier.
  double base_offset_hz = 0.0;
};
ClusterOps make_cluster_ops(const CouplingSet& c);
ClusterOps make_cluster_ops(const ClusterConfig& cfg);

// Block-diagonalize H_dip per M_Z sector and label every eigenstate with its
// energy, sector, <S^2>, s_eff and (where sharp) cyclic wavenumber. Inside a
// degenerate level the basis is stabilized by a secondary diagonalization of
// the shift operator, which makes the labels deterministic and exposes k.
EigenSystem classify_eigenstates(const ClusterOps& ops);

// One index per sector M_Z = -3..+3: the minimum-energy state. Degenerate
// minima are resolved deterministically (lowest k, then sector rank) and
// reported in es.notes by classify_eigenstates' caller.
std::array<int, 7> highspin_states(const EigenSystem& es);

struct SpinWaveLabel {
  int mz;
  int k;
  double s_eff;
};
// The twelve M_Z = +-2 states carry sharp wavenumbers; k = 0 are the S = 3
// members of the high-spin family, k != 0 are S = 2 spin waves.
std::vector<SpinWaveLabel> classify_spin_waves(const EigenSystem& es);

}  // namespace spinsim
