#include "causalnm/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace causalnm {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMatrix> as_eigen(const ComplexMatrix& m) {
  const auto dim = static_cast<Eigen::Index>(m.dim());
  return {m.entries().data(), dim, dim};
}

ComplexMatrix from_eigen(const EigenMatrix& m) {
  const auto dim = static_cast<std::size_t>(m.rows());
  return ComplexMatrix(dim, std::vector<cplx>(m.data(), m.data() + m.size()));
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw std::invalid_argument(msg.str());
  }
}

std::string hermitian_message(double violation, double tol) {
  std::ostringstream msg;
  msg << "matrix is not Hermitian: max |h - h^dagger| = " << violation << " exceeds tolerance " << tol;
  return msg.str();
}

EigenMatrix symmetrized(const ComplexMatrix& h, double tol) {
  const double violation = h.hermiticity_violation();
  if (!(violation <= tol)) throw NonHermitianError(violation, tol);
  const auto m = as_eigen(h);
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

NonHermitianError::NonHermitianError(double violation, double tol)
    : std::invalid_argument(hermitian_message(violation, tol)), violation_(violation) {}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
  if (entries_.size() != dim * dim) {
    std::ostringstream msg;
    msg << "ComplexMatrix: expected " << dim * dim << " entries, got " << entries_.size();
    throw std::invalid_argument(msg.str());
  }
  if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
  if (dim_ == 0) throw std::invalid_argument("ComplexMatrix: dimension must be positive");
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("ComplexMatrix: rows must form a square matrix");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
  if (ket.size() != bra.size()) throw std::invalid_argument("outer: ket and bra lengths differ");
  ComplexMatrix m(ket.size());
  for (std::size_t r = 0; r < ket.size(); ++r)
    for (std::size_t c = 0; c < bra.size(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (auto& z : out.entries_) z = std::conj(z);
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::hermiticity_violation() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = lhs(r, k);
      if (a == cplx{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

const ComplexMatrix& pauli(std::size_t index) {
  static const std::array<ComplexMatrix, 4> paulis{
      ComplexMatrix{{1.0, 0.0}, {0.0, 1.0}},
      ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}},
      ComplexMatrix{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}},
      ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}},
  };
  if (index > 3) throw std::out_of_range("pauli: index must be in 0..3");
  return paulis[index];
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t ar = 0; ar < da; ++ar)
    for (std::size_t ac = 0; ac < da; ++ac) {
      const cplx scale = a(ar, ac);
      for (std::size_t br = 0; br < db; ++br)
        for (std::size_t bc = 0; bc < db; ++bc) out(ar * db + br, ac * db + bc) = scale * b(br, bc);
    }
  if (!out.all_finite()) throw std::invalid_argument("kron: non-finite entry");
  return out;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

double HermitianSpectrum::sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }

double HermitianSpectrum::abs_sum() const {
  return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0,
                         [](double acc, double v) { return acc + std::abs(v); });
}

HermitianSpectrum hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  const EigenMatrix sym = symmetrized(h, tol);
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  HermitianSpectrum spectrum{{values.data(), values.data() + values.size()}, h.dim()};
  std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  return spectrum;
}

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol) {
  const EigenMatrix sym = symmetrized(h, tol);
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigensystem: eigensolver did not converge");
  const auto& values = solver.eigenvalues();
  return {{values.data(), values.data() + values.size()}, from_eigen(solver.eigenvectors())};
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<EigenMatrix> svd(as_eigen(m));
  const auto& values = svd.singularValues();
  return {values.data(), values.data() + values.size()};
}

double trace_norm(const ComplexMatrix& m) {
  if (m.is_hermitian()) return hermitian_eigenvalues(m).abs_sum();
  const auto values = singular_values(m);
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double condition_number(const ComplexMatrix& m) {
  const auto values = singular_values(m);
  if (values.back() <= 0.0) return std::numeric_limits<double>::infinity();
  return values.front() / values.back();
}

ComplexMatrix inverse(const ComplexMatrix& m) {
  Eigen::FullPivLU<EigenMatrix> lu(as_eigen(m));
  if (!lu.isInvertible()) throw std::domain_error("inverse: matrix is singular");
  return from_eigen(lu.inverse());
}

ComplexMatrix unitary_evolution(const ComplexMatrix& h, double t) {
  const auto system = hermitian_eigensystem(h);
  const std::size_t n = h.dim();
  ComplexMatrix phases(n);
  for (std::size_t k = 0; k < n; ++k) phases(k, k) = std::exp(cplx(0.0, -system.eigenvalues[k] * t));
  return system.eigenvectors * phases * system.eigenvectors.adjoint();
}

namespace {

void require_bipartition(const ComplexMatrix& m, Bipartition dims, const char* what) {
  if (dims.dim_a == 0 || dims.dim_b == 0 || dims.dim_a * dims.dim_b != m.dim()) {
    std::ostringstream msg;
    msg << what << ": dimension " << m.dim() << " does not factor as " << dims.dim_a << " x " << dims.dim_b;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ComplexMatrix partial_transpose(const ComplexMatrix& m, Bipartition dims, Subsystem which) {
  require_bipartition(m, dims, "partial_transpose");
  const auto [da, db] = dims;
  ComplexMatrix out(m.dim());
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t k = 0; k < da; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          const cplx value = m(i * db + j, k * db + l);
          if (which == Subsystem::A)
            out(k * db + j, i * db + l) = value;
          else
            out(i * db + l, k * db + j) = value;
        }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition dims, Subsystem which) {
  require_bipartition(m, dims, "partial_trace");
  const auto [da, db] = dims;
  if (which == Subsystem::A) {
    ComplexMatrix out(db);
    for (std::size_t j = 0; j < db; ++j)
      for (std::size_t l = 0; l < db; ++l)
        for (std::size_t i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
    return out;
  }
  ComplexMatrix out(da);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
  return out;
}

}  // namespace causalnm
