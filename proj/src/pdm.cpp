#include "causalnm/pdm.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace causalnm {

namespace {

constexpr double kBranchCutoff = 1e-14;

ComplexMatrix pure_state_matrix(double theta, double phi) {
  const std::array<cplx, 2> ket{std::sin(theta), std::polar(1.0, phi) * std::cos(theta)};
  return ComplexMatrix::outer(ket, ket);
}

ComplexMatrix projector(std::size_t pauli_index, int outcome) {
  return (ComplexMatrix::identity(2) + pauli(pauli_index) * static_cast<double>(outcome)) * 0.5;
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

// Sum over outcome sequences of (product of outcomes) x probability, starting
// from a normalized state at event `event`.
double correlator_from(const ComplexMatrix& state, std::span<const KrausChannel> chain,
                       std::span<const std::size_t> indices, std::size_t event) {
  const std::size_t index = indices[event];
  const bool last = event + 1 == indices.size();
  if (index == 0) {
    if (last) return real_trace(state);
    return correlator_from(chain[event].map(state), chain, indices, event + 1);
  }
  double total = 0.0;
  for (const int outcome : {+1, -1}) {
    const auto proj = projector(index, outcome);
    const auto branch = proj * state * proj;
    const double probability = real_trace(branch);
    if (probability < kBranchCutoff) continue;
    if (last) {
      total += outcome * probability;
      continue;
    }
    const auto updated = chain[event].map(branch * (1.0 / probability));
    total += outcome * probability * correlator_from(updated, chain, indices, event + 1);
  }
  return total;
}

void require_qubit_channel(const KrausChannel& ch) {
  if (ch.dim() != 2) throw std::invalid_argument("pseudo-density matrices are defined for qubit channels only");
}

}  // namespace

QubitState::QubitState(ComplexMatrix m) : matrix_(std::move(m)) {
  if (matrix_.dim() != 2) throw std::invalid_argument("QubitState: matrix must be 2x2");
  require_density_matrix(matrix_);
}

QubitState QubitState::pure(double theta, double phi) {
  QubitState state(pure_state_matrix(theta, phi));
  state.angles_ = BlochAngles{theta, phi};
  return state;
}

QubitState QubitState::maximally_mixed() { return QubitState(ComplexMatrix::identity(2) * 0.5); }

QubitState QubitState::orthogonal_partner(double theta, double phi) {
  return pure(std::numbers::pi / 2.0 - theta, phi + std::numbers::pi);
}

PseudoDensityMatrix::PseudoDensityMatrix(ComplexMatrix m, std::size_t events)
    : matrix_(std::move(m)), events_(events), spectrum_{} {
  if (events == 0 || events > 8 || matrix_.dim() != (std::size_t{1} << events))
    throw std::invalid_argument("PseudoDensityMatrix: dimension must be 2^events");
  const double tr = std::abs(matrix_.trace() - 1.0);
  if (tr > 1e-10) {
    std::ostringstream msg;
    msg << "PseudoDensityMatrix: trace deviates from 1 by " << tr;
    throw std::invalid_argument(msg.str());
  }
  spectrum_ = hermitian_eigenvalues(matrix_);
}

ComplexMatrix PseudoDensityMatrix::marginal(std::size_t event) const {
  if (event >= events_) throw std::out_of_range("PseudoDensityMatrix::marginal: event index out of range");
  const std::size_t before = std::size_t{1} << event;
  const std::size_t after = matrix_.dim() / (2 * before);
  // Group as (before) (x) (event qubit) (x) (after) and trace the outer factors.
  ComplexMatrix out(2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t i = 0; i < before; ++i)
        for (std::size_t j = 0; j < after; ++j)
          out(a, b) += matrix_((i * 2 + a) * after + j, (i * 2 + b) * after + j);
  return out;
}

const ComplexMatrix& swap_operator() {
  static const ComplexMatrix swap = [] {
    ComplexMatrix sum(4);
    for (std::size_t i = 0; i < 4; ++i) sum += kron(pauli(i), pauli(i));
    return sum * 0.5;
  }();
  return swap;
}

PseudoDensityMatrix pdm_two_point(const QubitState& rho, const KrausChannel& ch) {
  require_qubit_channel(ch);
  const auto input = kron(rho.matrix(), ComplexMatrix::identity(2) * 0.5);
  return PseudoDensityMatrix(ch.map_on_second(anticommutator(input, swap_operator())), 2);
}

double sequential_correlator(const QubitState& rho, std::span<const KrausChannel> chain,
                             std::span<const std::size_t> pauli_indices) {
  if (pauli_indices.size() != chain.size() + 1)
    throw std::invalid_argument("sequential_correlator: need one Pauli index per event");
  for (const auto& ch : chain) require_qubit_channel(ch);
  return correlator_from(rho.matrix(), chain, pauli_indices, 0);
}

PseudoDensityMatrix pdm_k_point(const QubitState& rho, std::span<const KrausChannel> chain) {
  if (chain.empty()) throw std::invalid_argument("pdm_k_point: at least one channel is required");
  const std::size_t events = chain.size() + 1;
  if (events > 6) throw std::invalid_argument("pdm_k_point: at most 6 events are supported");
  for (const auto& ch : chain) require_qubit_channel(ch);

  const std::size_t terms = std::size_t{1} << (2 * events);
  const double norm = 1.0 / static_cast<double>(std::size_t{1} << events);
  std::vector<std::size_t> indices(events);
  ComplexMatrix sum(std::size_t{1} << events);
  for (std::size_t code = 0; code < terms; ++code) {
    // Base-4 digits of `code`, first event most significant.
    for (std::size_t e = 0; e < events; ++e) indices[e] = (code >> (2 * (events - 1 - e))) & 3U;
    const double value = correlator_from(rho.matrix(), chain, indices, 0);
    if (value == 0.0) continue;
    ComplexMatrix term = pauli(indices[0]);
    for (std::size_t e = 1; e < events; ++e) term = kron(term, pauli(indices[e]));
    sum += term * (value * norm);
  }
  return PseudoDensityMatrix(std::move(sum), events);
}

PseudoDensityMatrix pdm_from_correlators(const QubitState& rho, const KrausChannel& ch) {
  return pdm_k_point(rho, std::span<const KrausChannel>(&ch, 1));
}

double f_cm(const PseudoDensityMatrix& p) { return std::max(0.0, p.spectrum().abs_sum() - 1.0); }

double causality_F(const PseudoDensityMatrix& p) { return std::max(0.0, std::log2(p.spectrum().abs_sum())); }

double choi_negativity(const KrausChannel& ch) {
  const std::size_t d = ch.dim();
  const auto state = choi_standard(ch) * (1.0 / static_cast<double>(d));
  return std::max(0.0, std::log2(trace_norm(partial_transpose(state, {d, d}, Subsystem::B))));
}

bool is_causal(const PseudoDensityMatrix& p, double tol) { return p.spectrum().min() < -tol; }

}  // namespace causalnm
