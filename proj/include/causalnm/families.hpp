#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "causalnm/channel.hpp"

namespace causalnm {

/// Below this |G(t)| the time-local generator is treated as singular.
inline constexpr double kSingularTol = 1e-8;
/// Transfer matrices with a larger condition number are treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Damped Jaynes-Cummings model on resonance: Lorentzian reservoir with
/// coupling strength gamma0 and spectral width b (both inverse times).
struct ADParams {
  double gamma0;
  double b;

  /// Throws std::invalid_argument unless gamma0 > 0 and b > 0.
  void validate() const;
  /// gamma0 / b > 1/2: the decoherence function oscillates through zero.
  bool non_markovian() const { return gamma0 / b > 0.5; }
  /// sqrt(b^2 - 2 gamma0 b), imaginary in the non-Markovian regime.
  cplx d() const;
};

/// Non-unital mixing p(t) = sin^2(omega t) with damping lambda(t) = 1 - e^{-t}.
struct GADParams {
  double omega;

  void validate() const;
  double p(double t) const;
  static double lambda(double t);
};

/// Decoherence function G(t). Evaluated with complex d for both regimes; the
/// imaginary residue is checked to be below 1e-10 and dropped.
double decoherence_G(const ADParams& params, double t);

/// r(t) = 1 - G(t)^2.
double damping_r(const ADParams& params, double t);

/// Canonical decay rate gamma(t) = -2 Re[G'(t)/G(t)]. Empty when
/// |G(t)| < tol_sing, where the generator diverges.
std::optional<double> decay_rate_ad(const ADParams& params, double t, double tol_sing = kSingularTol);

/// Kraus pair {diag(1, sqrt(1-r)), sqrt(r)|0><1|}; |1> decays to |0>.
KrausChannel amplitude_damping(double r);

/// Four-operator generalized amplitude damping with mixing weight p and
/// damping lambda.
KrausChannel generalized_amplitude_damping(double p, double lambda);

enum class FamilyKind { amplitude_damping, generalized_amplitude_damping, unitary, custom_tabulated };

/// Closed time interval on which a family can be evaluated.
struct TimeDomain {
  double t_min;
  double t_max;
  bool contains(double t) const { return t >= t_min && t <= t_max; }
};

/// One-parameter dynamical map t -> E(t, 0).
class ChannelFamily {
 public:
  using Evaluator = std::function<KrausChannel(double)>;

  ChannelFamily(FamilyKind kind, Evaluator evaluator, std::optional<TimeDomain> domain = std::nullopt);

  FamilyKind kind() const noexcept { return kind_; }
  const std::optional<TimeDomain>& domain() const noexcept { return domain_; }
  /// Model parameters when the family is the damped Jaynes-Cummings model.
  const std::optional<ADParams>& ad_params() const noexcept { return ad_params_; }

  /// Throws std::out_of_range when t lies outside the family's domain.
  KrausChannel at(double t) const;

 private:
  friend ChannelFamily ad_family(const ADParams& params);

  FamilyKind kind_;
  Evaluator evaluator_;
  std::optional<TimeDomain> domain_;
  std::optional<ADParams> ad_params_;
};

ChannelFamily ad_family(const ADParams& params);
ChannelFamily gad_family(const GADParams& params);
/// U(t) = exp(-i h t) for a Hermitian qubit generator h.
ChannelFamily unitary_family(const ComplexMatrix& hamiltonian);
/// The constant identity map on a qubit.
ChannelFamily identity_family();

struct KrausSample {
  double t;
  std::vector<ComplexMatrix> kraus;
};

/// Piecewise-linear interpolation of tabulated Kraus operators. Sample sets
/// with fewer operators are padded with zeros; after interpolating, the set
/// is rescaled by S^{-1/2} (S = sum K^dagger K) so that the result is again
/// trace preserving, and completeness is re-validated.
ChannelFamily tabulated_family(std::vector<KrausSample> samples, double tol = kCptpTol);

/// Reads the custom-family text format:
///
///     dim 2
///     t 0.0
///     kraus 2
///     1 0 0 0        <- one matrix row: re im re im ...
///     0 0 1 0
///     0 0 0 0
///     0 0 0 0
///     t 0.5
///     ...
///
/// `kraus m` is followed by m matrices of `dim` rows each. Blank lines and
/// text after `#` are ignored. Every block is checked for completeness.
std::vector<KrausSample> parse_kraus_samples(std::istream& in, double tol = kCptpTol);

/// Minimum eigenvalue of the standard Choi matrix of the intermediate map
/// E(t+tau, t) = T(t+tau) T(t)^{-1}. Non-negative (within tolerance) means
/// the family is CP-divisible across [t, t+tau]. Empty when T(t) is too
/// ill-conditioned to invert.
std::optional<double> intermediate_map_witness(const ChannelFamily& family, double t, double tau,
                                               double max_condition = kMaxCondition);

}  // namespace causalnm
