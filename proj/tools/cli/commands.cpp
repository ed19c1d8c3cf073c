#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cli/cli.hpp"

namespace causalnm::cli {

namespace {

const char* kSweepHeader = "t,F,f_cm,gamma,trace_distance,flag";

std::string join_row(std::initializer_list<std::string> fields) {
  std::string row;
  for (const auto& field : fields) {
    if (!row.empty()) row += ',';
    row += field;
  }
  row += '\n';
  return row;
}

const char* flag_name(PointFlag flag) { return flag == PointFlag::ok ? "ok" : "singular"; }

RunConfig with_parameter(RunConfig cfg, const std::string& key, double value) {
  if (key == "gamma0")
    cfg.gamma0 = value;
  else if (key == "b")
    cfg.b = value;
  else if (key == "omega")
    cfg.omega = value;
  else
    throw std::invalid_argument("--scan: unsupported key '" + key + "' (expected gamma0, b or omega)");
  return cfg;
}

void write_measure_report(const MeasureReport& report, std::ostream& out) {
  out << "M = " << format_number(report.M) << '\n';
  out << "variant_M = " << format_number(report.variant_M) << '\n';
  out << "C = " << format_number(report.C) << '\n';
  if (report.argmax) {
    out << "argmax_theta = " << format_number(report.argmax->theta) << '\n';
    out << "argmax_phi = " << format_number(report.argmax->phi) << '\n';
  } else {
    out << "argmax = maximally_mixed\n";
  }
  out << "hcla = " << (report.hcla ? format_number(*report.hcla) : std::string("n/a")) << '\n';
  out << "blp = " << format_number(report.blp) << '\n';
}

MeasureOptions measure_options(const RunConfig& cfg) {
  MeasureOptions options;
  options.states = cfg.state_grid;
  options.threads = cfg.threads;
  options.tol_sing = cfg.tolerances.sing;
  return options;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
  if (result.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return {buffer, result.ptr};
}

std::vector<double> ScanSpec::values() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

void RunConfig::validate() const {
  switch (channel) {
    case ChannelChoice::ad:
      if (!gamma0 || !b) throw std::invalid_argument("--channel ad requires --gamma0 and --b");
      ADParams{*gamma0, *b}.validate();
      break;
    case ChannelChoice::gad:
      if (!omega) throw std::invalid_argument("--channel gad requires --omega");
      GADParams{*omega}.validate();
      break;
    case ChannelChoice::custom:
      if (!custom_file) throw std::invalid_argument("--channel custom requires --custom-file");
      break;
  }
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw std::invalid_argument("--theta and --phi must be finite");
  (void)grid();
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("--tau must be positive");
  if (!(tolerances.psd > 0.0) || !(tolerances.sing > 0.0) || !(tolerances.cptp > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (state_grid.n_theta < 8 || state_grid.n_phi < 1)
    throw std::invalid_argument("--state-grid must be at least 8x1");
}

ChannelFamily make_family(const RunConfig& cfg) {
  switch (cfg.channel) {
    case ChannelChoice::ad:
      return ad_family({*cfg.gamma0, *cfg.b});
    case ChannelChoice::gad:
      return gad_family({*cfg.omega});
    case ChannelChoice::custom: {
      std::ifstream in(*cfg.custom_file);
      if (!in) throw std::invalid_argument("cannot open custom family file '" + *cfg.custom_file + "'");
      return tabulated_family(parse_kraus_samples(in, cfg.tolerances.cptp), cfg.tolerances.cptp);
    }
  }
  throw std::logic_error("make_family: unknown channel");
}

void cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto family = make_family(cfg);
  const auto grid = cfg.grid();
  const auto rho = QubitState::pure(cfg.theta, cfg.phi);
  const auto plus = QubitState::pure(std::numbers::pi / 4.0, 0.0);
  const auto minus = QubitState::orthogonal_partner(std::numbers::pi / 4.0, 0.0);
  std::optional<Curve> rates;
  if (family.ad_params()) rates = decay_rate_curve(*family.ad_params(), grid, cfg.tolerances.sing);

  out << kSweepHeader << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.at(i);
    std::string f_value, fcm_value, gamma_value, distance;
    PointFlag flag = PointFlag::ok;
    try {
      const auto ch = family.at(t);
      const auto pdm = pdm_two_point(rho, ch);
      f_value = format_number(causality_F(pdm));
      fcm_value = format_number(f_cm(pdm));
      distance = format_number(0.5 * trace_norm(ch.map(plus.matrix() - minus.matrix())));
    } catch (const std::exception&) {
      flag = PointFlag::singular;
    }
    if (rates) {
      if (rates->flags[i] == PointFlag::ok)
        gamma_value = format_number(rates->values[i]);
      else
        flag = PointFlag::singular;
    }
    out << join_row({format_number(t), f_value, fcm_value, gamma_value, distance, flag_name(flag)});
  }
}

void cmd_measure(const RunConfig& cfg, std::ostream& report, std::ostream* csv) {
  const auto options = measure_options(cfg);
  if (!cfg.scan) {
    const auto result = nm_measure(make_family(cfg), cfg.grid(), options);
    write_measure_report(result, report);
    if (csv) {
      *csv << "M,variant_M,C,argmax_theta,argmax_phi,hcla,blp\n";
      *csv << join_row({format_number(result.M), format_number(result.variant_M), format_number(result.C),
                        result.argmax ? format_number(result.argmax->theta) : "",
                        result.argmax ? format_number(result.argmax->phi) : "",
                        result.hcla ? format_number(*result.hcla) : "", format_number(result.blp)});
    }
    return;
  }
  std::ostream& out = csv ? *csv : report;
  out << cfg.scan->key << ",M,C\n";
  for (const double value : cfg.scan->values()) {
    const RunConfig point = with_parameter(cfg, cfg.scan->key, value);
    point.validate();
    const auto result = nm_measure(make_family(point), point.grid(), options);
    out << join_row({format_number(value), format_number(result.M), format_number(result.C)});
  }
}

void cmd_pdm(const RunConfig& cfg, std::ostream& out) {
  const double t = cfg.time.value_or(cfg.t0);
  const auto family = make_family(cfg);
  const auto pdm = pdm_two_point(QubitState::pure(cfg.theta, cfg.phi), family.at(t));
  const auto& m = pdm.matrix();
  out << "t = " << format_number(t) << '\n';
  for (const bool imaginary : {false, true}) {
    out << (imaginary ? "PDM (imaginary part):\n" : "PDM (real part):\n");
    for (std::size_t r = 0; r < m.dim(); ++r) {
      for (std::size_t c = 0; c < m.dim(); ++c) {
        if (c > 0) out << ' ';
        out << format_number(imaginary ? m(r, c).imag() : m(r, c).real());
      }
      out << '\n';
    }
  }
  out << "eigenvalues =";
  for (const double v : pdm.spectrum().eigenvalues) out << ' ' << format_number(v);
  out << '\n';
  out << "f_cm = " << format_number(f_cm(pdm)) << '\n';
  out << "F = " << format_number(causality_F(pdm)) << '\n';
  out << "verdict = " << (is_causal(pdm, cfg.tolerances.psd) ? "causal" : "acausal") << '\n';
}

void cmd_divisibility(const RunConfig& cfg, std::ostream& out) {
  const auto grid = cfg.grid();
  if (!(cfg.tau > cfg.dt)) throw std::invalid_argument("--tau must exceed --dt");
  const auto family = make_family(cfg);
  out << "t,witness,flag\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.at(i);
    std::optional<double> witness;
    try {
      witness = intermediate_map_witness(family, t, cfg.tau);
    } catch (const std::out_of_range&) {
      witness.reset();
    } catch (const std::domain_error&) {
      witness.reset();
    }
    out << join_row({format_number(t), witness ? format_number(*witness) : "",
                     flag_name(witness ? PointFlag::ok : PointFlag::singular)});
  }
}

}  // namespace causalnm::cli
