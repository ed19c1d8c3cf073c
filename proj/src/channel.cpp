#include "causalnm/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace causalnm {

namespace {

std::string completeness_message(double violation) {
  std::ostringstream msg;
  msg << "Kraus operators are not trace preserving: max |sum K^dagger K - I| = " << violation;
  return msg.str();
}

double completeness_of(std::span<const ComplexMatrix> kraus, std::size_t dim) {
  ComplexMatrix sum(dim);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return max_abs_diff(sum, ComplexMatrix::identity(dim));
}

ComplexMatrix basis_op(std::size_t dim, std::size_t row, std::size_t col) {
  ComplexMatrix m(dim);
  m(row, col) = 1.0;
  return m;
}

void require_qubit(std::size_t dim, const char* what) {
  if (dim != 2) throw std::invalid_argument(std::string(what) + ": only qubit maps are supported");
}

}  // namespace

CompletenessError::CompletenessError(double violation)
    : std::invalid_argument(completeness_message(violation)), violation_(violation) {}

void require_density_matrix(const ComplexMatrix& rho, double tol) {
  if (!rho.is_hermitian(tol)) throw NonHermitianError(rho.hermiticity_violation(), tol);
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density matrix must have unit trace, got " << tr.real();
    throw std::invalid_argument(msg.str());
  }
  const double lowest = hermitian_eigenvalues(rho, tol).min();
  if (lowest < -tol) {
    std::ostringstream msg;
    msg << "density matrix must be positive semidefinite, min eigenvalue " << lowest;
    throw std::invalid_argument(msg.str());
  }
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, double tol) : dim_(0), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("KrausChannel: at least one Kraus operator is required");
  dim_ = kraus_.front().dim();
  for (const auto& k : kraus_)
    if (k.dim() != dim_) throw std::invalid_argument("KrausChannel: Kraus operators must share one dimension");
  const double violation = completeness_of(kraus_, dim_);
  if (!(violation <= tol)) throw CompletenessError(violation);
}

KrausChannel KrausChannel::identity(std::size_t dim) { return KrausChannel({ComplexMatrix::identity(dim)}); }

KrausChannel KrausChannel::unitary(const ComplexMatrix& u, double tol) { return KrausChannel({u}, tol); }

double KrausChannel::completeness_violation() const { return completeness_of(kraus_, dim_); }

ComplexMatrix KrausChannel::map(const ComplexMatrix& x) const {
  if (x.dim() != dim_) throw std::invalid_argument("KrausChannel::map: dimension mismatch");
  ComplexMatrix out(dim_);
  for (const auto& k : kraus_) out += k * x * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::map_on_second(const ComplexMatrix& x) const {
  if (x.dim() % dim_ != 0) throw std::invalid_argument("KrausChannel::map_on_second: dimension mismatch");
  const auto lift = ComplexMatrix::identity(x.dim() / dim_);
  ComplexMatrix out(x.dim());
  for (const auto& k : kraus_) {
    const auto big = kron(lift, k);
    out += big * x * big.adjoint();
  }
  return out;
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.dim() != ch.dim()) throw std::invalid_argument("apply: state and channel dimensions differ");
  require_density_matrix(rho);
  return ch.map(rho);
}

KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) throw std::invalid_argument("compose: channel dimensions differ");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& a : outer.kraus())
    for (const auto& b : inner.kraus()) kraus.push_back(a * b);
  return KrausChannel(std::move(kraus));
}

ComplexMatrix choi(const KrausChannel& ch) {
  const std::size_t d = ch.dim();
  ComplexMatrix out(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out += kron(basis_op(d, i, j), ch.map(basis_op(d, j, i)));
  return out;
}

ComplexMatrix choi_standard(const KrausChannel& ch) {
  const std::size_t d = ch.dim();
  ComplexMatrix out(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out += kron(basis_op(d, i, j), ch.map(basis_op(d, i, j)));
  return out;
}

ComplexMatrix transfer_matrix(const KrausChannel& ch) {
  require_qubit(ch.dim(), "transfer_matrix");
  ComplexMatrix t(4);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto image = ch.map(pauli(j));
    for (std::size_t i = 0; i < 4; ++i) t(i, j) = 0.5 * (pauli(i) * image).trace().real();
  }
  return t;
}

ComplexMatrix apply_transfer(const ComplexMatrix& t, const ComplexMatrix& x) {
  if (t.dim() != 4) throw std::invalid_argument("apply_transfer: transfer matrix must be 4x4");
  require_qubit(x.dim(), "apply_transfer");
  std::array<cplx, 4> coeff{};
  for (std::size_t j = 0; j < 4; ++j) coeff[j] = 0.5 * (pauli(j) * x).trace();
  ComplexMatrix out(2);
  for (std::size_t i = 0; i < 4; ++i) {
    cplx weight = 0.0;
    for (std::size_t j = 0; j < 4; ++j) weight += t(i, j) * coeff[j];
    out += pauli(i) * weight;
  }
  return out;
}

ComplexMatrix choi_from_transfer(const ComplexMatrix& t) {
  ComplexMatrix out(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out += kron(basis_op(2, i, j), apply_transfer(t, basis_op(2, i, j)));
  return out;
}

}  // namespace causalnm
