#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "causalnm/matrix.hpp"

namespace causalnm {

/// Max-entry tolerance on sum_j K_j^dagger K_j - I.
inline constexpr double kCptpTol = 1e-9;

/// Tolerance used when validating a density matrix (Hermiticity, trace, PSD).
inline constexpr double kStateTol = 1e-10;

class CompletenessError : public std::invalid_argument {
 public:
  explicit CompletenessError(double violation);
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

/// Throws std::invalid_argument unless rho is Hermitian, unit-trace and PSD
/// within tol.
void require_density_matrix(const ComplexMatrix& rho, double tol = kStateTol);

/// A CPTP map in operator-sum form, E[rho] = sum_j K_j rho K_j^dagger.
class KrausChannel {
 public:
  /// Validates shape and completeness; throws CompletenessError when
  /// max |sum K^dagger K - I| > tol.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus, double tol = kCptpTol);

  static KrausChannel identity(std::size_t dim);
  static KrausChannel unitary(const ComplexMatrix& u, double tol = kCptpTol);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const ComplexMatrix> kraus() const noexcept { return kraus_; }

  /// Largest entry of |sum_j K_j^dagger K_j - I|.
  double completeness_violation() const;

  /// E[x] for an arbitrary operator x, with no state checks.
  ComplexMatrix map(const ComplexMatrix& x) const;

  /// (I (x) E)[x] for an operator on (other (x) this) with the channel on the
  /// second, faster-varying factor.
  ComplexMatrix map_on_second(const ComplexMatrix& x) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> kraus_;
};

/// E[rho] for a density matrix; rejects inputs that are not states.
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

/// outer after inner: rho -> outer[inner[rho]].
KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner);

/// chi = sum_ij |i><j| (x) E(|j><i|). Hermitian with trace dim, but not
/// positive: for the identity channel it is the swap operator.
ComplexMatrix choi(const KrausChannel& ch);

/// C = sum_ij |i><j| (x) E(|i><j|). Positive semidefinite iff the map is
/// completely positive; C equals chi with subsystem A transposed.
ComplexMatrix choi_standard(const KrausChannel& ch);

/// Qubit Pauli transfer matrix T_ij = Tr[sigma_i E(sigma_j)] / 2, stored as a
/// real-valued 4x4 ComplexMatrix.
ComplexMatrix transfer_matrix(const KrausChannel& ch);

/// Standard Choi matrix of the (possibly non-CP) qubit map whose transfer
/// matrix is t.
ComplexMatrix choi_from_transfer(const ComplexMatrix& t);

/// Applies the qubit map with transfer matrix t to an operator.
ComplexMatrix apply_transfer(const ComplexMatrix& t, const ComplexMatrix& x);

}  // namespace causalnm
