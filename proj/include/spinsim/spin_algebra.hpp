#pragma once
#include "spinsim/complex_matrix.hpp"
#include "spinsim/eigen.hpp"

#include <array>

// Angular-momentum operators for N spin-1/2 sites and the exact rotation
// oracle used to validate the measurement pipeline.
//
// Conventions, used everywhere downstream:
//   hbar = 1; Hamiltonians carry angular frequency (rad/s); user-facing
//   frequencies are Hz with the 2*pi conversion at module boundaries.
//   Basis index i encodes the product state via bits: bit (k-1) of i is the
//   state of spin k, 0 = up, 1 = down. Hence M_Z(i) = N/2 - popcount(i).
namespace spinsim {

enum class Axis { X, Y, Z };

// Spin-1/2 component of site k (1-based) embedded in the 2^N product space.
CMat single_spin_op(int k, Axis axis, int N);

// S_axis = sum_k single_spin_op(k, axis, N)
CMat collective_op(Axis axis, int N);

// S^2 = S_X^2 + S_Y^2 + S_Z^2
CMat total_spin_squared(int N);

// Probabilities over the 7 magnetic quantum numbers M = -3..+3.
struct OutcomeDistribution {
  std::array<double, 7> p{};  // p[M + 3]

  double& at_m(int m) { return p[m + 3]; }
  double at_m(int m) const { return p[m + 3]; }
  double sum() const;
  // Enforces p_i >= -1e-12 and sum = 1 within the given tolerance.
  void validate(double sum_tol = 1e-9) const;
};

// |d^S_{M',M}(beta)|^2 for integer S <= 3, from exponentiating S_Y restricted
// to the (2S+1)-dimensional irreducible block. Entries with |M'| > S are 0.
OutcomeDistribution wigner_rotation_probs(int S, int M, double beta);

int mz_of_basis_state(int i, int N);  // N/2 - popcount as an integer (N even)

}  // namespace spinsim
