#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace causalnm {

using cplx = std::complex<double>;

/// Max-entry tolerance on |h - h^dagger| accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-10;

/// Thrown when an operation that requires a Hermitian input receives one
/// whose largest entry of |h - h^dagger| exceeds the tolerance.
class NonHermitianError : public std::invalid_argument {
 public:
  NonHermitianError(double violation, double tol);
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

/// Dense square complex matrix, row-major.
///
/// Tensor products follow one global convention: in kron(a, b) the factor
/// `a` indexes the slower-varying subsystem, so basis state |i>|j> of a
/// dA x dB system sits at row i * dB + j.
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim);
  /// Takes ownership of dim*dim row-major entries; rejects non-finite values.
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |ket><bra|
  static ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const cplx> entries() const noexcept { return entries_; }

  const cplx& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  cplx& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  cplx trace() const;

  /// Largest |entry| of (this - this^dagger).
  double hermiticity_violation() const;
  bool is_hermitian(double tol = kHermitianTol) const { return hermiticity_violation() <= tol; }
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(cplx scale, ComplexMatrix rhs) { return rhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<cplx> entries_;
};

/// Largest absolute entry of a - b. Dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pauli matrix sigma_i, with sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
const ComplexMatrix& pauli(std::size_t index);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// ab + ba, without the Jordan-product factor 1/2.
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Real eigenvalues of a Hermitian matrix, sorted ascending.
struct HermitianSpectrum {
  std::vector<double> eigenvalues;
  std::size_t source_dim = 0;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  double sum() const;
  double abs_sum() const;
};

struct HermitianEigensystem {
  std::vector<double> eigenvalues;
  /// Column k holds the eigenvector of eigenvalues[k].
  ComplexMatrix eigenvectors;
};

/// Rejects inputs with hermiticity_violation() > tol, then solves the
/// symmetrized matrix (h + h^dagger) / 2.
HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& h, double tol = kHermitianTol);
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol = kHermitianTol);

/// Singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& m);

/// Sum of singular values. Hermitian inputs (within kHermitianTol) go through
/// the eigenvalue path, everything else through the SVD.
double trace_norm(const ComplexMatrix& m);

/// Ratio of the largest to the smallest singular value; +inf when singular.
double condition_number(const ComplexMatrix& m);

ComplexMatrix inverse(const ComplexMatrix& m);

/// exp(-i h t) for Hermitian h.
ComplexMatrix unitary_evolution(const ComplexMatrix& h, double t);

enum class Subsystem { A, B };

struct Bipartition {
  std::size_t dim_a;
  std::size_t dim_b;
};

/// Transposes the indices of one tensor factor of a dA*dB operator.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Bipartition dims, Subsystem which);

/// Traces out `which`, returning the operator on the other factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition dims, Subsystem which);

}  // namespace causalnm
