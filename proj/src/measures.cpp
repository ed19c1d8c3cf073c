#include "causalnm/measures.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace causalnm {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr std::size_t kMinUsablePoints = 10;

std::vector<bool> exclusion_mask(const std::vector<PointFlag>& flags) {
  const std::size_t n = flags.size();
  std::vector<bool> excluded(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (flags[i] != PointFlag::singular) continue;
    const std::size_t lo = i >= kExclusionHalfWidth ? i - kExclusionHalfWidth : 0;
    const std::size_t hi = std::min(n - 1, i + kExclusionHalfWidth);
    for (std::size_t j = lo; j <= hi; ++j) excluded[j] = true;
  }
  return excluded;
}

// Trapezoid over consecutive pairs of points where the integrand exists.
template <class Integrand>
double trapezoid(const std::vector<std::optional<double>>& samples, double dt, Integrand&& integrand) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i)
    if (samples[i] && samples[i + 1]) total += 0.5 * dt * (integrand(*samples[i]) + integrand(*samples[i + 1]));
  return total;
}

void require_usable(const std::vector<std::optional<double>>& slopes) {
  const auto usable = std::count_if(slopes.begin(), slopes.end(), [](const auto& s) { return s.has_value(); });
  if (static_cast<std::size_t>(usable) < kMinUsablePoints) {
    std::ostringstream msg;
    msg << "too few unflagged points for a slope integral (" << usable << " < " << kMinUsablePoints << ")";
    throw std::invalid_argument(msg.str());
  }
}

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

Mat2 to_fixed(const ComplexMatrix& m) {
  Mat2 out;
  out << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return out;
}

// E(sigma_k) for k = 0..3 at one grid time. With these, the two-point PDM is
// (1/4) sum_k {rho, sigma_k} (x) E(sigma_k), which lets every candidate state
// reuse one channel evaluation per time.
struct PauliImages {
  std::array<Mat2, 4> image;
};

// Pauli images on the grid, shared by every candidate state. Evaluation
// failures become empty entries.
std::vector<std::optional<PauliImages>> sample_family(const ChannelFamily& family, const TimeGrid& grid,
                                                      std::size_t threads) {
  std::vector<std::optional<PauliImages>> samples(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t i) {
    try {
      const auto ch = family.at(grid.at(i));
      if (ch.dim() != 2) throw std::invalid_argument("measures require qubit channels");
      PauliImages images;
      for (std::size_t k = 0; k < 4; ++k) images.image[k] = to_fixed(ch.map(pauli(k)));
      samples[i] = images;
    } catch (const std::exception&) {
      samples[i].reset();
    }
  });
  return samples;
}

class PdmKernel {
 public:
  explicit PdmKernel(const QubitState& rho) {
    const Mat2 r = to_fixed(rho.matrix());
    for (std::size_t k = 0; k < 4; ++k) {
      const Mat2 s = to_fixed(pauli(k));
      jordan_[k] = (r * s + s * r) * 0.25;
    }
  }

  double causality(const PauliImages& images) const {
    Mat4 p = Mat4::Zero();
    for (std::size_t k = 0; k < 4; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) p.block<2, 2>(2 * a, 2 * b) += jordan_[k](a, b) * images.image[k];
    const Mat4 sym = (p + p.adjoint()) * 0.5;
    solver_.compute(sym, Eigen::EigenvaluesOnly);
    return std::max(0.0, std::log2(solver_.eigenvalues().cwiseAbs().sum()));
  }

 private:
  std::array<Mat2, 4> jordan_;
  mutable Eigen::SelfAdjointEigenSolver<Mat4> solver_;
};

Curve f_curve_from(const std::vector<std::optional<PauliImages>>& samples, const QubitState& rho,
                   const TimeGrid& grid) {
  Curve curve{grid, std::vector<double>(grid.size(), 0.0), std::vector<PointFlag>(grid.size(), PointFlag::ok)};
  const PdmKernel kernel(rho);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!samples[i]) {
      curve.flags[i] = PointFlag::singular;
      continue;
    }
    curve.values[i] = kernel.causality(*samples[i]);
  }
  return curve;
}

// ||m||_1 / 2 for a Hermitian 2x2 operator, from its closed-form eigenvalues.
double half_trace_norm(const Mat2& m) {
  const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double spread = std::hypot(0.5 * (m(0, 0).real() - m(1, 1).real()), std::abs(m(0, 1)));
  return 0.5 * (std::abs(mean + spread) + std::abs(mean - spread));
}

Curve trace_distance_from(const std::vector<std::optional<PauliImages>>& samples, const QubitState& rho1,
                          const QubitState& rho2, const TimeGrid& grid) {
  Curve curve{grid, std::vector<double>(grid.size(), 0.0), std::vector<PointFlag>(grid.size(), PointFlag::ok)};
  const ComplexMatrix difference = rho1.matrix() - rho2.matrix();
  std::array<cplx, 4> coeff{};
  for (std::size_t k = 0; k < 4; ++k) coeff[k] = 0.5 * (pauli(k) * difference).trace();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!samples[i]) {
      curve.flags[i] = PointFlag::singular;
      continue;
    }
    Mat2 image = Mat2::Zero();
    for (std::size_t k = 0; k < 4; ++k) image += coeff[k] * samples[i]->image[k];
    curve.values[i] = half_trace_norm(image);
  }
  return curve;
}

struct Candidate {
  std::optional<BlochAngles> angles;
  QubitState state() const {
    return angles ? QubitState::pure(angles->theta, angles->phi) : QubitState::maximally_mixed();
  }
};

std::vector<Candidate> candidate_states(StateGrid grid, bool include_mixed) {
  if (grid.n_theta < 2 || grid.n_phi < 1) throw std::invalid_argument("state grid needs n_theta >= 2 and n_phi >= 1");
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < grid.n_theta; ++i) {
    const double theta = kHalfPi * static_cast<double>(i) / static_cast<double>(grid.n_theta - 1);
    for (std::size_t j = 0; j < grid.n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid.n_phi);
      out.push_back({BlochAngles{theta, phi}});
    }
  }
  if (include_mixed) out.push_back({std::nullopt});
  return out;
}

// Index of the largest value; values within 1e-12 of it count as ties and
// resolve to the lowest index.
std::size_t argmax_of(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  return static_cast<std::size_t>(
      std::find_if(values.begin(), values.end(), [top](double v) { return v >= top - 1e-12; }) - values.begin());
}

// Golden-section search for the maximum of f on [lo, hi].
template <class F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi, double tol = 1e-7) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 100 && b - a > tol; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

TimeGrid::TimeGrid(double t0, double t_max, double dt) : t0_(t0), t_max_(t_max), dt_(dt), size_(0) {
  if (!std::isfinite(t0) || !std::isfinite(t_max) || !std::isfinite(dt))
    throw std::invalid_argument("TimeGrid: values must be finite");
  if (!(t0 < t_max)) throw std::invalid_argument("TimeGrid: t0 must be below t_max");
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
  const double steps = (t_max - t0) / dt;
  if (steps < 10.0 - 1e-9) throw std::invalid_argument("TimeGrid: need (t_max - t0) / dt >= 10");
  size_ = static_cast<std::size_t>(std::floor(steps + 1e-9)) + 1;
}

std::size_t Curve::unflagged() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), PointFlag::ok));
}

std::vector<std::optional<double>> curve_slopes(const Curve& curve) {
  const std::size_t n = curve.values.size();
  if (curve.flags.size() != n || n != curve.grid.size())
    throw std::invalid_argument("curve_slopes: values, flags and grid disagree in length");
  const auto excluded = exclusion_mask(curve.flags);
  const double dt = curve.grid.dt();
  std::vector<std::optional<double>> slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (excluded[i]) continue;
    const bool left = i > 0 && !excluded[i - 1];
    const bool right = i + 1 < n && !excluded[i + 1];
    if (left && right)
      slopes[i] = (curve.values[i + 1] - curve.values[i - 1]) / (2.0 * dt);
    else if (right)
      slopes[i] = (curve.values[i + 1] - curve.values[i]) / dt;
    else if (left)
      slopes[i] = (curve.values[i] - curve.values[i - 1]) / dt;
  }
  return slopes;
}

Curve f_curve(const ChannelFamily& family, const QubitState& rho, const TimeGrid& grid) {
  Curve curve{grid, std::vector<double>(grid.size(), 0.0), std::vector<PointFlag>(grid.size(), PointFlag::ok)};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      curve.values[i] = causality_F(pdm_two_point(rho, family.at(grid.at(i))));
    } catch (const std::exception&) {
      curve.flags[i] = PointFlag::singular;
    }
  }
  return curve;
}

double positive_slope_integral(const Curve& curve) {
  const auto slopes = curve_slopes(curve);
  require_usable(slopes);
  return trapezoid(slopes, curve.grid.dt(), [](double s) { return std::max(s, 0.0); });
}

double total_variation_measure(const Curve& curve) {
  const auto slopes = curve_slopes(curve);
  require_usable(slopes);
  const double variation = trapezoid(slopes, curve.grid.dt(), [](double s) { return std::abs(s); });
  const auto first = std::find_if(slopes.begin(), slopes.end(), [](const auto& s) { return s.has_value(); });
  const auto last = std::find_if(slopes.rbegin(), slopes.rend(), [](const auto& s) { return s.has_value(); });
  const auto first_index = static_cast<std::size_t>(first - slopes.begin());
  const auto last_index = slopes.size() - 1 - static_cast<std::size_t>(last - slopes.rbegin());
  return variation + curve.values[last_index] - curve.values[first_index];
}

MeasureReport nm_measure(const ChannelFamily& family, const TimeGrid& grid, const MeasureOptions& options) {
  if (options.states.n_theta < 8 || options.states.n_phi < 1)
    throw std::invalid_argument("nm_measure: state grid must be at least 8 x 1");
  const auto samples = sample_family(family, grid, options.threads);
  const auto candidates = candidate_states(options.states, options.include_mixed);

  std::vector<double> scores(candidates.size());
  detail::parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    scores[i] = positive_slope_integral(f_curve_from(samples, candidates[i].state(), grid));
  });
  const std::size_t best = argmax_of(scores);

  MeasureReport report;
  report.M = scores[best];
  report.argmax = candidates[best].angles;

  if (options.refine && report.argmax && report.M > 0.0) {
    const double phi = report.argmax->phi;
    const double spacing = kHalfPi / static_cast<double>(options.states.n_theta - 1);
    const double lo = std::max(0.0, report.argmax->theta - spacing);
    const double hi = std::min(kHalfPi, report.argmax->theta + spacing);
    const auto score = [&](double theta) {
      return positive_slope_integral(f_curve_from(samples, QubitState::pure(theta, phi), grid));
    };
    const auto [theta, value] = golden_maximize(score, lo, hi);
    if (value > report.M) {
      report.M = value;
      report.argmax = BlochAngles{theta, phi};
    }
  }

  const QubitState winner = Candidate{report.argmax}.state();
  report.variant_M = total_variation_measure(f_curve_from(samples, winner, grid));
  report.C = report.M / (1.0 + report.M);
  if (family.ad_params()) report.hcla = hcla_measure(*family.ad_params(), grid, options.tol_sing).value;
  report.blp = blp_measure(family, grid, options.states, options.threads);
  return report;
}

Curve decay_rate_curve(const ADParams& params, const TimeGrid& grid, double tol_sing) {
  params.validate();
  const std::size_t n = grid.size();
  Curve curve{grid, std::vector<double>(n, 0.0), std::vector<PointFlag>(n, PointFlag::ok)};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = decoherence_G(params, grid.at(i));
    if (const auto rate = decay_rate_ad(params, grid.at(i), tol_sing))
      curve.values[i] = *rate;
    else
      curve.flags[i] = PointFlag::singular;
  }
  // A root of G strictly between two grid points: flag the closer neighbour.
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (g[i] * g[i + 1] < 0.0) curve.flags[std::abs(g[i]) <= std::abs(g[i + 1]) ? i : i + 1] = PointFlag::singular;
  return curve;
}

HclaResult hcla_measure(const ADParams& params, const TimeGrid& grid, double tol_sing) {
  const auto rates = decay_rate_curve(params, grid, tol_sing);
  const auto excluded = exclusion_mask(rates.flags);
  std::vector<std::optional<double>> kept(rates.values.size());
  HclaResult result;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (rates.flags[i] == PointFlag::singular) ++result.singularities;
    if (excluded[i])
      ++result.excluded_points;
    else
      kept[i] = rates.values[i];
  }
  result.value = trapezoid(kept, grid.dt(), [](double rate) { return std::max(-rate, 0.0); });
  return result;
}

Curve trace_distance_curve(const ChannelFamily& family, const QubitState& rho1, const QubitState& rho2,
                           const TimeGrid& grid) {
  return trace_distance_from(sample_family(family, grid, 1), rho1, rho2, grid);
}

double blp_measure(const ChannelFamily& family, const TimeGrid& grid, StateGrid pairs, std::size_t threads) {
  if (pairs.n_theta < 8 || pairs.n_phi < 1) throw std::invalid_argument("blp_measure: pair grid must be at least 8 x 1");
  const auto samples = sample_family(family, grid, threads);
  const auto candidates = candidate_states(pairs, false);
  std::vector<double> scores(candidates.size());
  detail::parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const auto& [theta, phi] = *candidates[i].angles;
    const auto curve =
        trace_distance_from(samples, QubitState::pure(theta, phi), QubitState::orthogonal_partner(theta, phi), grid);
    scores[i] = positive_slope_integral(curve);
  });
  return scores[argmax_of(scores)];
}

}  // namespace causalnm
