#include "causalnm/families.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <sstream>
#include <string>

namespace causalnm {

namespace {

// e^{-bt/2} cosh(dt/2) and e^{-bt/2} sinh(dt/2) / d, written with the decay
// folded into the exponentials so large t does not overflow.
struct ScaledHyperbolics {
  cplx cosh_part;
  cplx sinh_over_d;
};

ScaledHyperbolics scaled_hyperbolics(const ADParams& params, double t) {
  const cplx d = params.d();
  const cplx z = d * t / 2.0;
  const double decay = std::exp(-params.b * t / 2.0);
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return {decay * (1.0 + z2 / 2.0 + z2 * z2 / 24.0), decay * (t / 2.0) * (1.0 + z2 / 6.0 + z2 * z2 / 120.0)};
  }
  const cplx grow = std::exp((d - params.b) * t / 2.0);
  const cplx shrink = std::exp((-d - params.b) * t / 2.0);
  return {(grow + shrink) / 2.0, (grow - shrink) / (2.0 * d)};
}

double drop_imaginary(cplx value, const char* what) {
  if (std::abs(value.imag()) > 1e-10) {
    std::ostringstream msg;
    msg << what << ": imaginary residue " << value.imag() << " exceeds 1e-10";
    throw std::logic_error(msg.str());
  }
  return value.real();
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

void ADParams::validate() const {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("ADParams: gamma0 must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("ADParams: b must be positive");
}

cplx ADParams::d() const { return std::sqrt(cplx(b * b - 2.0 * gamma0 * b, 0.0)); }

void GADParams::validate() const {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("GADParams: omega must be non-negative");
}

double GADParams::p(double t) const {
  const double s = std::sin(omega * t);
  return s * s;
}

double GADParams::lambda(double t) { return -std::expm1(-t); }

double decoherence_G(const ADParams& params, double t) {
  const auto h = scaled_hyperbolics(params, t);
  return drop_imaginary(h.cosh_part + params.b * h.sinh_over_d, "decoherence_G");
}

double damping_r(const ADParams& params, double t) {
  const double g = decoherence_G(params, t);
  return clamp_unit(1.0 - g * g);
}

std::optional<double> decay_rate_ad(const ADParams& params, double t, double tol_sing) {
  const auto h = scaled_hyperbolics(params, t);
  const cplx g = h.cosh_part + params.b * h.sinh_over_d;
  if (std::abs(g) < tol_sing) return std::nullopt;
  // gamma = 2 Re[gamma0 / (sqrt(1 - 2 gamma0/b) coth(b t sqrt(1 - 2 gamma0/b) / 2) + 1)],
  // multiplied through by sinh so the coth poles disappear.
  return 2.0 * (params.gamma0 * params.b * h.sinh_over_d / g).real();
}

KrausChannel amplitude_damping(double r) {
  if (!(r >= -1e-12 && r <= 1.0 + 1e-12)) throw std::invalid_argument("amplitude_damping: r must lie in [0, 1]");
  r = clamp_unit(r);
  return KrausChannel({ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - r)}},
                       ComplexMatrix{{0.0, std::sqrt(r)}, {0.0, 0.0}}});
}

KrausChannel generalized_amplitude_damping(double p, double lambda) {
  if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw std::invalid_argument("generalized_amplitude_damping: p must lie in [0, 1]");
  if (!(lambda >= -1e-12 && lambda <= 1.0 + 1e-12))
    throw std::invalid_argument("generalized_amplitude_damping: lambda must lie in [0, 1]");
  p = clamp_unit(p);
  lambda = clamp_unit(lambda);
  const double keep = std::sqrt(1.0 - p);
  const double flip = std::sqrt(p);
  const double survive = std::sqrt(1.0 - lambda);
  const double jump = std::sqrt(lambda);
  return KrausChannel({
      ComplexMatrix{{keep, 0.0}, {0.0, keep * survive}},
      ComplexMatrix{{0.0, keep * jump}, {0.0, 0.0}},
      ComplexMatrix{{flip * survive, 0.0}, {0.0, flip}},
      ComplexMatrix{{0.0, 0.0}, {flip * jump, 0.0}},
  });
}

ChannelFamily::ChannelFamily(FamilyKind kind, Evaluator evaluator, std::optional<TimeDomain> domain)
    : kind_(kind), evaluator_(std::move(evaluator)), domain_(domain) {
  if (!evaluator_) throw std::invalid_argument("ChannelFamily: evaluator is empty");
}

KrausChannel ChannelFamily::at(double t) const {
  if (!std::isfinite(t)) throw std::invalid_argument("ChannelFamily::at: time must be finite");
  if (domain_ && !domain_->contains(t)) {
    std::ostringstream msg;
    msg << "ChannelFamily::at: t = " << t << " outside [" << domain_->t_min << ", " << domain_->t_max << "]";
    throw std::out_of_range(msg.str());
  }
  return evaluator_(t);
}

ChannelFamily ad_family(const ADParams& params) {
  params.validate();
  ChannelFamily family(FamilyKind::amplitude_damping,
                       [params](double t) { return amplitude_damping(damping_r(params, t)); });
  family.ad_params_ = params;
  return family;
}

ChannelFamily gad_family(const GADParams& params) {
  params.validate();
  return ChannelFamily(FamilyKind::generalized_amplitude_damping, [params](double t) {
    return generalized_amplitude_damping(params.p(t), GADParams::lambda(t));
  });
}

ChannelFamily unitary_family(const ComplexMatrix& hamiltonian) {
  if (hamiltonian.dim() != 2) throw std::invalid_argument("unitary_family: generator must be 2x2");
  if (!hamiltonian.is_hermitian()) throw NonHermitianError(hamiltonian.hermiticity_violation(), kHermitianTol);
  return ChannelFamily(FamilyKind::unitary,
                       [hamiltonian](double t) { return KrausChannel::unitary(unitary_evolution(hamiltonian, t)); });
}

ChannelFamily identity_family() { return unitary_family(ComplexMatrix(2)); }

namespace {

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& s) {
  const auto system = hermitian_eigensystem(s);
  if (system.eigenvalues.front() < 1e-6)
    throw CompletenessError(max_abs_diff(s, ComplexMatrix::identity(s.dim())));
  ComplexMatrix scale(s.dim());
  for (std::size_t k = 0; k < s.dim(); ++k) scale(k, k) = 1.0 / std::sqrt(system.eigenvalues[k]);
  return system.eigenvectors * scale * system.eigenvectors.adjoint();
}

KrausChannel interpolate(const KrausSample& lo, const KrausSample& hi, double t, std::size_t dim, double tol) {
  const double u = (t - lo.t) / (hi.t - lo.t);
  const std::size_t count = std::max(lo.kraus.size(), hi.kraus.size());
  const ComplexMatrix zero(dim);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(count);
  ComplexMatrix s(dim);
  for (std::size_t j = 0; j < count; ++j) {
    const auto& a = j < lo.kraus.size() ? lo.kraus[j] : zero;
    const auto& b = j < hi.kraus.size() ? hi.kraus[j] : zero;
    kraus.push_back(a * (1.0 - u) + b * u);
    s += kraus.back().adjoint() * kraus.back();
  }
  const auto correction = inverse_sqrt_psd(s);
  for (auto& k : kraus) k = k * correction;
  return KrausChannel(std::move(kraus), tol);
}

}  // namespace

ChannelFamily tabulated_family(std::vector<KrausSample> samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("tabulated_family: no samples");
  const std::size_t dim = samples.front().kraus.empty() ? 0 : samples.front().kraus.front().dim();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t)) throw std::invalid_argument("tabulated_family: sample time must be finite");
    if (i > 0 && !(samples[i].t > samples[i - 1].t))
      throw std::invalid_argument("tabulated_family: sample times must be strictly increasing");
    const KrausChannel check(samples[i].kraus, tol);
    if (check.dim() != dim) throw std::invalid_argument("tabulated_family: samples disagree on dimension");
  }
  const TimeDomain domain{samples.front().t, samples.back().t};
  auto table = std::make_shared<const std::vector<KrausSample>>(std::move(samples));
  return ChannelFamily(
      FamilyKind::custom_tabulated,
      [table, dim, tol](double t) {
        const auto& rows = *table;
        const auto upper = std::lower_bound(rows.begin(), rows.end(), t,
                                            [](const KrausSample& s, double value) { return s.t < value; });
        if (upper != rows.end() && upper->t == t) return KrausChannel(upper->kraus, tol);
        return interpolate(*(upper - 1), *upper, t, dim, tol);
      },
      domain);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty line with comments stripped; false at end of input.
  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "custom family, line " << number_ << ": " << what;
    throw std::invalid_argument(msg.str());
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

bool at_end(std::istringstream& fields) {
  fields >> std::ws;
  return fields.eof();
}

}  // namespace

std::vector<KrausSample> parse_kraus_samples(std::istream& in, double tol) {
  LineReader reader(in);
  std::istringstream fields;
  std::string keyword;

  if (!reader.next(fields)) reader.fail("empty input, expected 'dim <n>'");
  std::size_t dim = 0;
  if (!(fields >> keyword >> dim) || keyword != "dim" || dim == 0 || !at_end(fields))
    reader.fail("expected 'dim <n>' with n > 0");

  std::vector<KrausSample> samples;
  while (reader.next(fields)) {
    KrausSample sample{};
    if (!(fields >> keyword >> sample.t) || keyword != "t" || !at_end(fields)) reader.fail("expected 't <value>'");
    std::size_t count = 0;
    if (!reader.next(fields) || !(fields >> keyword >> count) || keyword != "kraus" || count == 0 || !at_end(fields))
      reader.fail("expected 'kraus <m>' with m > 0");
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<cplx> entries;
      entries.reserve(dim * dim);
      for (std::size_t row = 0; row < dim; ++row) {
        if (!reader.next(fields)) reader.fail("unexpected end of input inside a Kraus matrix");
        for (std::size_t col = 0; col < dim; ++col) {
          double re = 0.0;
          double im = 0.0;
          if (!(fields >> re >> im)) reader.fail("expected " + std::to_string(2 * dim) + " reals per matrix row");
          entries.emplace_back(re, im);
        }
        if (!at_end(fields)) reader.fail("too many values in matrix row");
      }
      sample.kraus.emplace_back(dim, std::move(entries));
    }
    try {
      const KrausChannel check(sample.kraus, tol);
    } catch (const CompletenessError& e) {
      reader.fail(std::string("block at t = ") + std::to_string(sample.t) + ": " + e.what());
    }
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) reader.fail("no 't' blocks");
  return samples;
}

std::optional<double> intermediate_map_witness(const ChannelFamily& family, double t, double tau,
                                               double max_condition) {
  if (!(tau > 0.0)) throw std::invalid_argument("intermediate_map_witness: tau must be positive");
  const auto start = transfer_matrix(family.at(t));
  if (!(condition_number(start) <= max_condition)) return std::nullopt;
  const auto end = transfer_matrix(family.at(t + tau));
  const auto step = end * inverse(start);
  return hermitian_eigenvalues(choi_from_transfer(step), 1e-8).min();
}

}  // namespace causalnm
