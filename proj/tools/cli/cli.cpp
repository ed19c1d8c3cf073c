#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

namespace causalnm::cli {

namespace {

StateGrid parse_state_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  std::size_t n_theta = 0;
  std::size_t n_phi = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("missing 'x'");
    std::size_t used = 0;
    n_theta = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("trailing characters");
    const std::string rest = text.substr(x + 1);
    n_phi = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("--state-grid expects NTHETAxNPHI, got '" + text + "'");
  }
  return {n_theta, n_phi};
}

ScanSpec parse_scan(const std::string& text) {
  const auto eq = text.find('=');
  const auto first = text.find(':', eq == std::string::npos ? 0 : eq);
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (eq == std::string::npos || eq == 0 || first == std::string::npos || second == std::string::npos)
    throw std::invalid_argument("--scan expects KEY=a:b:n, got '" + text + "'");
  ScanSpec spec{text.substr(0, eq), 0.0, 0.0, 0};
  try {
    std::size_t used = 0;
    const std::string from = text.substr(eq + 1, first - eq - 1);
    const std::string to = text.substr(first + 1, second - first - 1);
    const std::string count = text.substr(second + 1);
    spec.from = std::stod(from, &used);
    if (used != from.size()) throw std::invalid_argument("from");
    spec.to = std::stod(to, &used);
    if (used != to.size()) throw std::invalid_argument("to");
    spec.count = std::stoul(count, &used);
    if (used != count.size() || spec.count == 0) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw std::invalid_argument("--scan expects KEY=a:b:n with n >= 1, got '" + text + "'");
  }
  return spec;
}

enum class Command { sweep, measure, pdm, divisibility };

struct RawOptions {
  std::string channel = "ad";
  std::optional<double> gamma0, b, omega, time;
  double theta = 1.5707963267948966;
  double phi = 0.0;
  double t0 = 0.0;
  double t_max = 10.0;
  double dt = 1e-3;
  std::string state_grid = "24x12";
  double tau = 0.1;
  std::optional<std::string> scan, custom_file, out;
  Tolerances tolerances{};
  std::size_t threads = 0;
};

void add_options(CLI::App& app, RawOptions& raw) {
  app.add_option("--channel", raw.channel, "Channel model")
      ->check(CLI::IsMember({"ad", "gad", "custom"}))
      ->capture_default_str();
  app.add_option("--gamma0", raw.gamma0, "Coupling strength of the damped Jaynes-Cummings model");
  app.add_option("--b", raw.b, "Spectral bandwidth of the damped Jaynes-Cummings model");
  app.add_option("--omega", raw.omega, "Mixing frequency of generalized amplitude damping");
  app.add_option("--theta", raw.theta, "Initial-state angle theta (radians)")->capture_default_str();
  app.add_option("--phi", raw.phi, "Initial-state phase phi (radians)")->capture_default_str();
  app.add_option("--t0", raw.t0, "Grid start time")->capture_default_str();
  app.add_option("--tmax", raw.t_max, "Grid end time")->capture_default_str();
  app.add_option("--dt", raw.dt, "Grid step")->capture_default_str();
  app.add_option("--state-grid", raw.state_grid, "Bloch grid for state optimization, NTHETAxNPHI")
      ->capture_default_str();
  app.add_option("--tau", raw.tau, "Intermediate-map duration for the divisibility scan")->capture_default_str();
  app.add_option("--time", raw.time, "Evaluation time for the pdm command (defaults to --t0)");
  app.add_option("--scan", raw.scan, "Parameter scan KEY=a:b:n for the measure command");
  app.add_option("--custom-file", raw.custom_file, "Tabulated Kraus family for --channel custom");
  app.add_option("--out", raw.out, "Output file (CSV for sweep, divisibility and measure scans)");
  app.add_option("--tol-psd", raw.tolerances.psd, "Negative-eigenvalue threshold for the causal verdict")
      ->capture_default_str();
  app.add_option("--tol-sing", raw.tolerances.sing, "|G| below which the decay rate is singular")
      ->capture_default_str();
  app.add_option("--tol-cptp", raw.tolerances.cptp, "Completeness tolerance for custom Kraus operators")
      ->capture_default_str();
  app.add_option("--threads", raw.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  app.set_config("--config", "", "Read options from a 'key = value' file; command-line flags take precedence");
}

RunConfig to_config(const RawOptions& raw) {
  RunConfig cfg;
  static const std::map<std::string, ChannelChoice> channels{
      {"ad", ChannelChoice::ad}, {"gad", ChannelChoice::gad}, {"custom", ChannelChoice::custom}};
  cfg.channel = channels.at(raw.channel);
  cfg.gamma0 = raw.gamma0;
  cfg.b = raw.b;
  cfg.omega = raw.omega;
  cfg.theta = raw.theta;
  cfg.phi = raw.phi;
  cfg.t0 = raw.t0;
  cfg.t_max = raw.t_max;
  cfg.dt = raw.dt;
  cfg.state_grid = parse_state_grid(raw.state_grid);
  cfg.tau = raw.tau;
  cfg.time = raw.time;
  if (raw.scan) cfg.scan = parse_scan(*raw.scan);
  cfg.custom_file = raw.custom_file;
  cfg.output_path = raw.out;
  cfg.tolerances = raw.tolerances;
  cfg.threads = raw.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causality-monotone non-Markovianity toolkit", "causalnm"};
  app.require_subcommand(1);
  RawOptions raw;
  add_options(app, raw);

  Command command = Command::sweep;
  const auto add_command = [&](const char* name, const char* help, Command which) {
    app.add_subcommand(name, help)->fallthrough()->callback([&command, which] { command = which; });
  };
  add_command("sweep", "Tabulate F, f_cm, gamma and trace distance over the time grid (CSV)", Command::sweep);
  add_command("measure", "Non-Markovianity measures M, C, HCLA and BLP", Command::measure);
  add_command("pdm", "Print the two-point pseudo-density matrix at one time", Command::pdm);
  add_command("divisibility", "Intermediate-map Choi witness over the time grid (CSV)", Command::divisibility);

  try {
    std::vector<std::string> stack(args.rbegin(), args.rend());
    app.parse(stack);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const RunConfig cfg = to_config(raw);
    std::ofstream file;
    if (cfg.output_path) {
      file.open(*cfg.output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw std::invalid_argument("cannot write output file '" + *cfg.output_path + "'");
    }
    std::ostream& target = cfg.output_path ? static_cast<std::ostream&>(file) : out;
    switch (command) {
      case Command::sweep:
        cmd_sweep(cfg, target);
        break;
      case Command::measure:
        cmd_measure(cfg, out, cfg.output_path ? &target : nullptr);
        break;
      case Command::pdm:
        cmd_pdm(cfg, target);
        break;
      case Command::divisibility:
        cmd_divisibility(cfg, target);
        break;
    }
    target.flush();
    if (!target) throw std::runtime_error("failed while writing output");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace causalnm::cli
