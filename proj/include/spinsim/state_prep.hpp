#pragma once
#include "spinsim/system_model.hpp"

#include <utility>
#include <vector>

// Initial states for the measurement experiments and the direct projective
// measurement oracle.
namespace spinsim {

// Hermitian, unit trace, positive semidefinite (within numerical tolerance).
struct DensityMatrix {
  CMat rho;

  int dim() const { return rho.n; }
  // Throws NumericalError on Hermitian defect > 1e-12, |trace-1| > 1e-12, or
  // an eigenvalue below -1e-10.
  void validate() const;
};

// Ideal pseudopure state for eigenstate `index` of the classified system:
// the pure projector |psi><psi|. The identity component of a laboratory
// pseudopure state is invariant under every unitary and drops out of all
// population differences, so it is omitted rather than carried around.
DensityMatrix pseudopure(const EigenSystem& es, int index);

// High-temperature thermal state (I + eps S_Z) / 2^N: unit trace, adjacent
// M_Z populations differ by exactly eps/2^N. Positivity requires
// |eps| <= 1/3 at N = 6 (|M_Z| <= 3).
DensityMatrix thermal_equilibrium(double eps, int N = 6);

// Projective measurement of Hermitian observable O: diagonalize, group
// eigenvalues within 1e-9 * max|lambda|, and return (eigenvalue, probability)
// pairs in ascending eigenvalue order.
struct ProjectiveOutcome {
  std::vector<std::pair<double, double>> outcomes;

  // Maps outcomes onto integer M slots -3..+3 (eigenvalues rounded; throws
  // if an eigenvalue is not within 1e-6 of an integer in range).
  OutcomeDistribution to_distribution() const;
};
ProjectiveOutcome project_measurement(const DensityMatrix& rho, const CMat& O);

}  // namespace spinsim
