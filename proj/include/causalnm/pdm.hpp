#pragma once

#include <optional>
#include <span>
#include <vector>

#include "causalnm/channel.hpp"
#include "causalnm/matrix.hpp"

namespace causalnm {

/// Eigenvalue threshold separating causal (some eigenvalue < -tol) from
/// acausal pseudo-density matrices.
inline constexpr double kCausalTol = 1e-10;

struct BlochAngles {
  double theta;
  double phi;
};

/// A validated qubit density matrix.
class QubitState {
 public:
  /// Throws std::invalid_argument unless m is a 2x2 Hermitian PSD unit-trace matrix.
  explicit QubitState(ComplexMatrix m);

  /// |psi> = sin(theta)|0> + e^{i phi} cos(theta)|1>. theta = pi/2 is |0>,
  /// theta = 0 is |1>; theta in [0, pi/2] with phi in [0, 2pi) covers the sphere.
  static QubitState pure(double theta, double phi = 0.0);
  static QubitState maximally_mixed();
  /// The orthogonal partner of pure(theta, phi), i.e. pure(pi/2 - theta, phi + pi).
  static QubitState orthogonal_partner(double theta, double phi = 0.0);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::optional<BlochAngles>& bloch_angles() const noexcept { return angles_; }

 private:
  ComplexMatrix matrix_;
  std::optional<BlochAngles> angles_;
};

/// Hermitian, unit-trace operator over k measurement events, possibly with
/// negative eigenvalues.
class PseudoDensityMatrix {
 public:
  /// Validates Hermiticity and unit trace (within 1e-10) and caches the spectrum.
  PseudoDensityMatrix(ComplexMatrix m, std::size_t events);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t events() const noexcept { return events_; }
  const HermitianSpectrum& spectrum() const noexcept { return spectrum_; }

  /// Reduced operator for one event of a two-event PDM (0 = first, 1 = second).
  ComplexMatrix marginal(std::size_t event) const;

 private:
  ComplexMatrix matrix_;
  std::size_t events_;
  HermitianSpectrum spectrum_;
};

/// Q_swap = (1/2) sum_i sigma_i (x) sigma_i.
const ComplexMatrix& swap_operator();

/// (I (x) E)[{rho (x) I/2, Q_swap}], channel on the second event.
PseudoDensityMatrix pdm_two_point(const QubitState& rho, const KrausChannel& ch);

/// The same two-event PDM, assembled from operationally computed Pauli
/// correlators <sigma_i (x) sigma_j>: projective measurement of sigma_i on
/// rho (Lueders update), evolution through ch, measurement of sigma_j.
PseudoDensityMatrix pdm_from_correlators(const QubitState& rho, const KrausChannel& ch);

/// k-event PDM for a chain of k-1 channels between consecutive measurements.
PseudoDensityMatrix pdm_k_point(const QubitState& rho, std::span<const KrausChannel> chain);

/// Sequential-measurement correlator <sigma_{i_1} ... sigma_{i_k}> with
/// chain[m] acting between events m and m+1. Index 0 means "no measurement"
/// at that event.
double sequential_correlator(const QubitState& rho, std::span<const KrausChannel> chain,
                             std::span<const std::size_t> pauli_indices);

/// ||P||_1 - 1.
double f_cm(const PseudoDensityMatrix& p);

/// log2 ||P||_1; zero exactly when P is positive semidefinite.
double causality_F(const PseudoDensityMatrix& p);

/// log2 || (C/2)^PT ||_1 for the normalized standard Choi state C/2, equal to
/// causality_F of the PDM generated from the maximally mixed input.
double choi_negativity(const KrausChannel& ch);

/// True when the minimum eigenvalue is below -tol.
bool is_causal(const PseudoDensityMatrix& p, double tol = kCausalTol);

}  // namespace causalnm
