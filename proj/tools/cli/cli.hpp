#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "causalnm/measures.hpp"

namespace causalnm::cli {

enum class ChannelChoice { ad, gad, custom };

/// `--scan KEY=a:b:n`: n evenly spaced values of one model parameter.
struct ScanSpec {
  std::string key;
  double from;
  double to;
  std::size_t count;

  std::vector<double> values() const;
};

struct Tolerances {
  double psd = kCausalTol;
  double sing = kSingularTol;
  double cptp = kCptpTol;
};

struct RunConfig {
  ChannelChoice channel = ChannelChoice::ad;
  std::optional<double> gamma0;
  std::optional<double> b;
  std::optional<double> omega;
  double theta = 1.5707963267948966;
  double phi = 0.0;
  double t0 = 0.0;
  double t_max = 10.0;
  double dt = 1e-3;
  StateGrid state_grid{};
  double tau = 0.1;
  std::optional<double> time;
  std::optional<ScanSpec> scan;
  std::optional<std::string> custom_file;
  std::optional<std::string> output_path;
  Tolerances tolerances{};
  std::size_t threads = 0;

  /// Throws std::invalid_argument on missing or out-of-range values.
  void validate() const;
  TimeGrid grid() const { return {t0, t_max, dt}; }
};

/// Family selected by the config (reads --custom-file when needed).
ChannelFamily make_family(const RunConfig& cfg);

/// Formats a double with 12 significant digits, '.' as decimal separator.
std::string format_number(double value);

// Each command writes its primary output (CSV or report) to `out`.
void cmd_sweep(const RunConfig& cfg, std::ostream& out);
void cmd_measure(const RunConfig& cfg, std::ostream& report, std::ostream* csv);
void cmd_pdm(const RunConfig& cfg, std::ostream& out);
void cmd_divisibility(const RunConfig& cfg, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causalnm::cli
