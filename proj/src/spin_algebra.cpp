#include "spinsim/spin_algebra.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinsim/errors.hpp"

namespace spinsim {

int mz_of_basis_state(int i, int N) {
  return N / 2 - std::popcount(static_cast<unsigned>(i));
}

CMat single_spin_op(int k, Axis axis, int N) {
  if (k < 1 || k > N) throw std::out_of_range("single_spin_op: spin index");
  const int dim = 1 << N;
  const int mask = 1 << (k - 1);
  CMat A(dim);
  for (int i = 0; i < dim; ++i) {
    const bool down = (i & mask) != 0;
    switch (axis) {
      case Axis::Z:
        A(i, i) = down ? -0.5 : 0.5;
        break;
      case Axis::X:
        A(i ^ mask, i) = 0.5;  // flip either way, amplitude 1/2
        break;
      case Axis::Y:
        // <down|S_Y|up> = i/2, <up|S_Y|down> = -i/2
        A(i ^ mask, i) = down ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
        break;
    }
  }
  return A;
}

CMat collective_op(Axis axis, int N) {
  CMat S(1 << N);
  for (int k = 1; k <= N; ++k) add_scaled(S, single_spin_op(k, axis, N), 1.0);
  return S;
}

CMat total_spin_squared(int N) {
  CMat S2(1 << N);
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
    CMat S = collective_op(ax, N);
    add_scaled(S2, matmul(S, S), 1.0);
  }
  return S2;
}

double OutcomeDistribution::sum() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

void OutcomeDistribution::validate(double sum_tol) const {
  for (double v : p)
    if (v < -1e-12)
      throw NumericalError("OutcomeDistribution: negative probability");
  if (std::abs(sum() - 1.0) > sum_tol)
    throw NumericalError("OutcomeDistribution: probabilities do not sum to 1");
}

OutcomeDistribution wigner_rotation_probs(int S, int M, double beta) {
  if (S < 0 || S > 3)
    throw std::invalid_argument("wigner_rotation_probs: need 0 <= S <= 3");
  if (std::abs(M) > S)
    throw std::invalid_argument("wigner_rotation_probs: need |M| <= S");

  // S_Y on the (2S+1)-dim irrep, basis |S,-S>..|S,S>:
  // <M+1|S+|M> = sqrt(S(S+1) - M(M+1)),  S_Y = (S+ - S-) / 2i,
  // so <M+1|S_Y|M> = -i/2 sqrt(...) and <M|S_Y|M+1> = +i/2 sqrt(...).
  const int d = 2 * S + 1;
  CMat Sy(d);
  for (int m = -S; m < S; ++m) {
    const double c = 0.5 * std::sqrt(static_cast<double>(S * (S + 1) - m * (m + 1)));
    Sy(m + 1 + S, m + S) = cplx(0.0, -c);
    Sy(m + S, m + 1 + S) = cplx(0.0, c);
  }
  CMat U = unitary_step(Sy, beta);  // exp(-i beta S_Y)

  OutcomeDistribution out;
  for (int mp = -S; mp <= S; ++mp)
    out.at_m(mp) = std::norm(U(mp + S, M + S));
  return out;
}

}  // namespace spinsim
