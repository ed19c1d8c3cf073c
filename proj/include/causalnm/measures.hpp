#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causalnm/families.hpp"
#include "causalnm/pdm.hpp"

namespace causalnm {

/// Points within this many grid steps of a singular point are excluded from
/// derivatives and quadratures.
inline constexpr std::size_t kExclusionHalfWidth = 10;

/// Uniform grid t0, t0 + dt, ..., up to and including t_max when it falls on
/// the lattice.
class TimeGrid {
 public:
  /// Requires t0 < t_max, dt > 0 and at least 10 steps.
  TimeGrid(double t0, double t_max, double dt);

  double t0() const noexcept { return t0_; }
  double t_max() const noexcept { return t_max_; }
  double dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return size_; }
  double at(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }

 private:
  double t0_;
  double t_max_;
  double dt_;
  std::size_t size_;
};

enum class PointFlag : std::uint8_t { ok, singular };

struct Curve {
  TimeGrid grid;
  std::vector<double> values;
  std::vector<PointFlag> flags;

  std::size_t unflagged() const;
};

/// Per-point dF/dt: central differences inside, one-sided next to a gap or a
/// boundary, empty within kExclusionHalfWidth points of a flagged point.
std::vector<std::optional<double>> curve_slopes(const Curve& curve);

/// F(t) of the two-point PDM for rho evolved by the family. Points where the
/// family cannot be evaluated are flagged.
Curve f_curve(const ChannelFamily& family, const QubitState& rho, const TimeGrid& grid);

/// Trapezoidal integral of max(dF/dt, 0). Throws std::invalid_argument when
/// fewer than 10 usable points remain.
double positive_slope_integral(const Curve& curve);

/// Integral of |dF/dt| plus F(end) - F(start); twice the positive-slope
/// integral up to discretization error.
double total_variation_measure(const Curve& curve);

struct StateGrid {
  std::size_t n_theta = 24;
  std::size_t n_phi = 12;
};

struct MeasureOptions {
  StateGrid states{};
  /// Also try the maximally mixed state as a candidate.
  bool include_mixed = true;
  /// Golden-section refinement in theta around the best grid state.
  bool refine = true;
  /// Worker threads for candidate evaluation; 0 picks the hardware count.
  std::size_t threads = 0;
  double tol_sing = kSingularTol;
};

struct MeasureReport {
  /// Maximum positive-slope integral of F over initial states.
  double M = 0.0;
  /// M / (1 + M).
  double C = 0.0;
  /// Maximizing pure state; empty when the maximally mixed state wins.
  std::optional<BlochAngles> argmax;
  /// Total-variation form at the maximizing state.
  double variant_M = 0.0;
  /// Decay-rate measure, only for the damped Jaynes-Cummings family.
  std::optional<double> hcla;
  /// Trace-distance revival measure over orthogonal pure pairs.
  double blp = 0.0;
};

MeasureReport nm_measure(const ChannelFamily& family, const TimeGrid& grid, const MeasureOptions& options = {});

/// gamma(t) on the grid. Points with |G| < tol_sing, or where G changes sign
/// before the next grid point, are flagged.
Curve decay_rate_curve(const ADParams& params, const TimeGrid& grid, double tol_sing = kSingularTol);

struct HclaResult {
  /// Trapezoidal integral of max(-gamma, 0) over the retained points.
  double value = 0.0;
  /// Grid points dropped around generator singularities.
  std::size_t excluded_points = 0;
  /// Number of flagged singular points.
  std::size_t singularities = 0;
};

HclaResult hcla_measure(const ADParams& params, const TimeGrid& grid, double tol_sing = kSingularTol);

/// D(t) = || E_t(rho1) - E_t(rho2) ||_1 / 2.
Curve trace_distance_curve(const ChannelFamily& family, const QubitState& rho1, const QubitState& rho2,
                           const TimeGrid& grid);

/// Maximum positive-slope integral of D(t) over orthogonal pure pairs
/// (theta, phi), (pi/2 - theta, phi + pi) on the given grid.
double blp_measure(const ChannelFamily& family, const TimeGrid& grid, StateGrid pairs = {}, std::size_t threads = 0);

}  // namespace causalnm
