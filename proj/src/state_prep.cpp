#include "spinsim/state_prep.hpp"

#include <cmath>

#include "spinsim/errors.hpp"

namespace spinsim {

void DensityMatrix::validate() const {
  if (herm_defect(rho) > 1e-12)
    throw NumericalError("DensityMatrix: not Hermitian");
  if (std::abs(trace(rho) - 1.0) > 1e-12)
    throw NumericalError("DensityMatrix: trace != 1");
  EigenDecomposition ed = hermitian_eig(rho);
  if (ed.eigenvalues.front() < -1e-10)
    throw NumericalError("DensityMatrix: negative eigenvalue");
}

DensityMatrix pseudopure(const EigenSystem& es, int index) {
  if (index < 0 || index >= static_cast<int>(es.states.size()))
    throw ConfigError("pseudopure: eigenstate index out of range");
  const CVec& v = es.states[index].vec;
  return DensityMatrix{outer(v, v)};
}

DensityMatrix thermal_equilibrium(double eps, int N) {
  if (std::abs(eps) > 1.0 / 3.0 + 1e-15)
    throw ConfigError("thermal_equilibrium: |eps| > 1/3 violates positivity");
  const int dim = 1 << N;
  CMat rho(dim);
  for (int i = 0; i < dim; ++i)
    rho(i, i) = (1.0 + eps * mz_of_basis_state(i, N)) / dim;
  return DensityMatrix{std::move(rho)};
}

ProjectiveOutcome project_measurement(const DensityMatrix& rho, const CMat& O) {
  EigenDecomposition ed = hermitian_eig(O);
  const int n = O.n;
  const double gtol =
      1e-9 * std::max(std::abs(ed.eigenvalues.front()),
                      std::abs(ed.eigenvalues.back())) +
      1e-12;

  ProjectiveOutcome out;
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && ed.eigenvalues[j] - ed.eigenvalues[j - 1] <= gtol) ++j;
    double lambda = 0.0, prob = 0.0;
    for (int t = i; t < j; ++t) {
      lambda += ed.eigenvalues[t];
      const CVec v = ed.column(t);
      const CVec rv = matvec(rho.rho, v);
      prob += std::real(dotc(v, rv));
    }
    out.outcomes.emplace_back(lambda / (j - i), prob);
    i = j;
  }
  return out;
}

OutcomeDistribution ProjectiveOutcome::to_distribution() const {
  OutcomeDistribution d;
  for (const auto& [lambda, prob] : outcomes) {
    const int m = static_cast<int>(std::lround(lambda));
    if (std::abs(lambda - m) > 1e-6 || m < -3 || m > 3)
      throw NumericalError("ProjectiveOutcome: eigenvalue is not an integer M");
    d.at_m(m) += prob;
  }
  return d;
}

}  // namespace spinsim
