// Copyright 2026 The phasecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasecast/errors.hpp"
#include "phasecast/estimation.hpp"
#include "phasecast/oracles.hpp"
#include "phasecast/settings.hpp"
#include "phasecast/validation.hpp"

namespace phasecast::cli {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kObservables{"sld-optimal", "sigma-x", "sigma-x-tensor",
                                            "bell-projector"};

constexpr double kRowSlack = 1e-9;

Cell from_sensitivity(const Sensitivity& s) {
  return s.indeterminate ? Cell::na() : Cell::of(s.value);
}

// Classical Fisher information of measuring in the SLD eigenbasis.
Cell sld_measurement(const StateWithDerivative& s) {
  return from_sensitivity(classical_fisher(s, hermitian_eig(sld(s)).vectors));
}

ScanRecord make_record(const ScanConfig& config, const ChannelParams& c, Cell n_opt, int n) {
  ScanRecord r;
  r.setting = config.setting;
  r.n = n;
  r.phi = config.phi;
  r.kappa = config.kappa;
  r.seed = config.seed;
  r.n_opt = n_opt;
  r.f_lower = Cell::of(lower_bound_f(n, c));
  const bool separable = config.wants("sigma-x") || config.wants("sigma-x-tensor");
  const bool optimal = config.wants("sld-optimal");
  switch (config.setting) {
    case Setting::kSequential: {
      r.qfi = Cell::of(qfi_sequential_general(n, c));
      if (separable) r.sens_sigma_x = from_sensitivity(sigma_x_sensitivity_closed(n, c));
      if (optimal) r.sens_opt = sld_measurement(sequential_tangent(plus_state(), n, c));
      break;
    }
    case Setting::kAncilla: {
      r.qfi = Cell::of(qfi_ancilla_closed(n, c));
      if (separable) r.sens_sigma_x = from_sensitivity(separable_sensitivity_ancilla(n, c));
      if (config.wants("bell-projector")) {
        r.sens_bell = from_sensitivity(bell_observable_sensitivity(n, c));
      }
      if (optimal) r.sens_opt = sld_measurement(ancilla_tangent(n, c));
      break;
    }
    case Setting::kParallel: {
      r.qfi = Cell::of(qfi_parallel_closed(n, c));
      if (separable) r.sens_sigma_x = from_sensitivity(sigma_x_tensor_sensitivity(n, c));
      if (optimal) r.sens_opt = Cell::of(qfi_xstate(ghz_output_tangent(n, c)));
      break;
    }
  }
  if (r.f_lower.value > r.qfi.value + kRowSlack * std::max(1.0, r.qfi.value)) {
    throw DomainError("scan: lower bound exceeds the QFI at N = " + std::to_string(n));
  }
  return r;
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::kCsv;
  if (s == "json") return Format::kJson;
  throw InvalidInput("unknown format '" + s + "' (expected csv or json)");
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno != 0 || text.front() == '-') {
    throw InvalidInput(std::string("invalid seed in ") + source + ": '" + text + "'");
  }
  return v;
}

// Value reparsed from its printed form, so JSON and CSV agree exactly.
json cell_json(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kValue: {
      const std::string text = format_number(c.value);
      if (text == "NA" || text == "INF") return text;
      const double v = std::strtod(text.c_str(), nullptr);
      if (v == std::floor(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
      return v;
    }
    case Cell::Kind::kNa:
      return "NA";
    case Cell::Kind::kInf:
      return "INF";
    case Cell::Kind::kEmpty:
      break;
  }
  return nullptr;
}

json number_json(double v) { return cell_json(Cell::of(v)); }

// Options shared by scan, trajectory and channel-info.
struct CommonOptions {
  ScanConfig config;
  std::string setting = "sequential";
  std::string format = "csv";
  std::string seed;
  std::string config_path;
  CLI::Option* o_setting = nullptr;
  CLI::Option* o_phi = nullptr;
  CLI::Option* o_kappa = nullptr;
  CLI::Option* o_n_min = nullptr;
  CLI::Option* o_n_max = nullptr;
  CLI::Option* o_observables = nullptr;
  CLI::Option* o_mc = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_format = nullptr;

  void attach(CLI::App* app) {
    o_setting = app->add_option("--setting", setting, "sequential | ancilla | parallel");
    o_phi = app->add_option("--phi", config.phi, "Phase in radians");
    o_kappa = app->add_option("--kappa", config.kappa, "Axis concentration");
    o_n_min = app->add_option("--n-min", config.n_min, "First N");
    o_n_max = app->add_option("--n-max", config.n_max, "Last N");
    o_observables = app->add_option("--observables", config.observables,
                                    "Comma list of sld-optimal, sigma-x, sigma-x-tensor, "
                                    "bell-projector")
                        ->delimiter(',');
    o_mc = app->add_option("--mc-samples", config.mc_samples,
                           "Monte Carlo samples per channel evaluation (0 = exact)");
    o_seed = app->add_option("--seed", seed, "64-bit seed (falls back to PHASECAST_SEED)");
    o_format = app->add_option("--format", format, "csv | json");
    app->add_option("--config", config_path, "Flat JSON file; flags override its values");
  }

  void load_config_file() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw InvalidInput("cannot open config file '" + config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw InvalidInput("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InvalidInput("config file must hold a single JSON object");
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "setting") {
          if (!o_setting->count()) setting = value.get<std::string>();
        } else if (key == "phi") {
          if (!o_phi->count()) config.phi = value.get<double>();
        } else if (key == "kappa") {
          if (!o_kappa->count()) config.kappa = value.get<double>();
        } else if (key == "n_min") {
          if (!o_n_min->count()) config.n_min = value.get<int>();
        } else if (key == "n_max") {
          if (!o_n_max->count()) config.n_max = value.get<int>();
        } else if (key == "observables") {
          if (!o_observables->count()) {
            config.observables = value.is_string()
                                     ? CLI::detail::split(value.get<std::string>(), ',')
                                     : value.get<std::vector<std::string>>();
          }
        } else if (key == "mc_samples") {
          if (!o_mc->count()) config.mc_samples = value.get<std::uint64_t>();
        } else if (key == "seed") {
          if (!o_seed->count()) {
            seed = value.is_string() ? value.get<std::string>()
                                     : std::to_string(value.get<std::uint64_t>());
          }
        } else if (key == "format") {
          if (!o_format->count()) format = value.get<std::string>();
        } else {
          throw InvalidInput("unknown config key '" + key + "'");
        }
      }
    } catch (const json::exception& e) {
      throw InvalidInput("config file has a value of the wrong type: " + std::string(e.what()));
    }
  }

  ScanConfig resolve() {
    load_config_file();
    config.setting = parse_setting(setting);
    config.format = parse_format(format);
    if (!seed.empty()) {
      config.seed = parse_seed(seed, "--seed");
    } else if (const char* env = std::getenv("PHASECAST_SEED")) {
      config.seed = parse_seed(env, "PHASECAST_SEED");
    } else {
      config.seed = kDefaultSeed;
    }
    config.validate();
    return config;
  }
};

void write_channel_info(const ScanConfig& config, const ChannelParams& c, std::ostream& out) {
  Cell n_opt;
  try {
    n_opt = Cell::of(n_opt_estimate(c));
  } catch (const DomainError&) {
    n_opt = Cell::inf();
  }
  const std::vector<std::pair<std::string, Cell>> rows{
      {"phi", Cell::of(config.phi)},
      {"kappa", Cell::of(config.kappa)},
      {"lambda_par", Cell::of(c.lambda_par)},
      {"lambda_perp", Cell::of(c.lambda_perp)},
      {"g", Cell::of(c.g)},
      {"d_lambda_par", Cell::of(c.d_lambda_par)},
      {"d_lambda_perp", Cell::of(c.d_lambda_perp)},
      {"d_g", Cell::of(c.d_g)},
      {"S_re", Cell::of(c.S.real())},
      {"S_im", Cell::of(c.S.imag())},
      {"dS_re", Cell::of(c.dS.real())},
      {"dS_im", Cell::of(c.dS.imag())},
      {"mu", Cell::of(c.mu)},
      {"nu", Cell::of(c.nu)},
      {"alpha", Cell::of(alpha_param(c))},
      {"n_opt", n_opt},
      {"mc_samples", Cell::of(static_cast<double>(config.mc_samples))},
      {"seed", Cell::of(static_cast<double>(config.seed))},
  };
  if (config.format == Format::kJson) {
    json j = json::object();
    for (const auto& [k, v] : rows) j[k] = cell_json(v);
    j["seed"] = config.seed;
    out << j.dump(2) << "\n";
    return;
  }
  out << "quantity,value\n";
  for (const auto& [k, v] : rows) {
    if (k == "seed") {
      out << k << "," << config.seed << "\n";
    } else {
      out << k << "," << format_cell(v) << "\n";
    }
  }
}

void write_trajectory(const ScanConfig& config, const ChannelParams& c, std::ostream& out) {
  const auto points = bloch_trajectory(config.n_max, c);
  json rows = json::array();
  if (config.format == Format::kCsv) out << "N,r_x,r_y,r_z,sld_angle,sens_sigma_x,qfi\n";
  for (const auto& p : points) {
    Cell sens = Cell::of(0.0);
    Cell qfi = Cell::of(0.0);
    if (p.rounds > 0) {
      sens = from_sensitivity(sigma_x_sensitivity_closed(p.rounds, c));
      qfi = Cell::of(qfi_sequential_general(p.rounds, c));
    }
    const std::array<Cell, 6> cells{Cell::of(p.bloch.r[0]), Cell::of(p.bloch.r[1]),
                                    Cell::of(p.bloch.r[2]), Cell::of(p.sld_angle), sens, qfi};
    if (config.format == Format::kCsv) {
      out << p.rounds;
      for (const auto& cell : cells) out << "," << format_cell(cell);
      out << "\n";
    } else {
      rows.push_back({{"N", p.rounds},
                      {"r_x", cell_json(cells[0])},
                      {"r_y", cell_json(cells[1])},
                      {"r_z", cell_json(cells[2])},
                      {"sld_angle", cell_json(cells[3])},
                      {"sens_sigma_x", cell_json(cells[4])},
                      {"qfi", cell_json(cells[5])}});
    }
  }
  if (config.format == Format::kJson) out << rows.dump(2) << "\n";
}

std::vector<double> default_phis() { return {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 1.5}; }
std::vector<double> default_kappas() { return {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}; }

void write_contour(const std::vector<double>& phis, const std::vector<double>& kappas,
                   Format format, std::ostream& out) {
  if (phis.empty() || kappas.empty()) throw InvalidInput("nopt-contour: grids must be nonempty");
  for (double p : phis) {
    if (!(p > 0.0)) throw InvalidInput("nopt-contour: phi values must be positive");
  }
  for (double k : kappas) {
    if (!(k > 0.0)) throw InvalidInput("nopt-contour: kappa values must be positive");
  }
  std::vector<std::vector<Cell>> grid(phis.size(), std::vector<Cell>(kappas.size()));
  for (std::size_t i = 0; i < phis.size(); ++i) {
    for (std::size_t j = 0; j < kappas.size(); ++j) {
      ChannelParams c;
      c.lambda_perp = std::abs(vmf_coherence_factor({kappas[j], phis[i]}));
      try {
        grid[i][j] = Cell::of(n_opt_estimate(c));
      } catch (const DomainError&) {
        grid[i][j] = Cell::inf();
      }
    }
  }
  if (format == Format::kJson) {
    json j;
    j["phi"] = json::array();
    j["kappa"] = json::array();
    for (double p : phis) j["phi"].push_back(number_json(p));
    for (double k : kappas) j["kappa"].push_back(number_json(k));
    j["n_opt"] = json::array();
    for (const auto& row : grid) {
      json r = json::array();
      for (const auto& cell : row) r.push_back(cell_json(cell));
      j["n_opt"].push_back(r);
    }
    out << j.dump(2) << "\n";
    return;
  }
  out << "phi";
  for (double k : kappas) out << ",kappa=" << format_number(k);
  out << "\n";
  for (std::size_t i = 0; i < phis.size(); ++i) {
    out << format_number(phis[i]);
    for (const auto& cell : grid[i]) out << "," << format_cell(cell);
    out << "\n";
  }
}

int report_validation(const ValidationOptions& options, std::ostream& out, std::ostream& err) {
  const auto results = run_validation(options);
  int failed = 0;
  for (const auto& r : results) {
    char line[160];
    std::snprintf(line, sizeof line, "%s %-45s deviation=%.3e tolerance=%.3e time=%.2fs",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.deviation, r.tolerance,
                  r.seconds);
    out << line;
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
    if (!r.passed) {
      ++failed;
      err << "validation check failed: " << r.name << "\n";
    }
  }
  err << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed ? kValidationFailed : kOk;
}

}  // namespace

void ScanConfig::validate() const {
  if (n_min < 1) throw InvalidInput("n_min must be at least 1");
  if (n_max < n_min) throw InvalidInput("n_max must be at least n_min");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidInput("kappa must be positive");
  if (!std::isfinite(phi)) throw InvalidInput("phi must be finite");
  for (const auto& o : observables) {
    if (std::find(kObservables.begin(), kObservables.end(), o) == kObservables.end()) {
      throw InvalidInput("unknown observable '" + o + "'");
    }
  }
}

bool ScanConfig::wants(const std::string& observable) const {
  return std::find(observables.begin(), observables.end(), observable) != observables.end();
}

std::string setting_name(Setting s) {
  switch (s) {
    case Setting::kSequential:
      return "sequential";
    case Setting::kAncilla:
      return "ancilla";
    case Setting::kParallel:
      return "parallel";
  }
  return "?";
}

Setting parse_setting(const std::string& s) {
  if (s == "sequential") return Setting::kSequential;
  if (s == "ancilla") return Setting::kAncilla;
  if (s == "parallel") return Setting::kParallel;
  throw InvalidInput("unknown setting '" + s + "' (expected sequential, ancilla or parallel)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return "INF";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kValue:
      return format_number(c.value);
    case Cell::Kind::kNa:
      return "NA";
    case Cell::Kind::kInf:
      return "INF";
    case Cell::Kind::kEmpty:
      break;
  }
  return "";
}

ChannelParams channel_for(const ScanConfig& config) {
  const VmfParams p{config.kappa, config.phi};
  if (config.mc_samples == 0) return channel_params_vmf(p);
  const MonteCarloChannel mc(config.kappa, config.mc_samples, CounterRng(config.seed));
  // Sampling noise sets the scale at which covariance can be confirmed.
  const double tol = std::max(1e-6, 10.0 / std::sqrt(static_cast<double>(config.mc_samples)));
  ChannelParams c = process_tomography([&mc](double phi) { return mc.at(phi); }, config.phi, tol);
  if (!c.completely_positive()) {
    throw DomainError("sampled channel is not completely positive; increase --mc-samples");
  }
  return c;
}

std::vector<ScanRecord> scan(const ScanConfig& config) {
  config.validate();
  const ChannelParams c = channel_for(config);
  Cell n_opt;
  try {
    n_opt = Cell::of(n_opt_estimate(c));
  } catch (const DomainError&) {
    n_opt = Cell::inf();
  }

  const std::size_t count = static_cast<std::size_t>(config.n_max - config.n_min) + 1;
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(count, 16));
  std::vector<ScanRecord> records(count);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          // Interleaved so that costlier large-N rows spread across workers.
          for (std::size_t i = w; i < count; i += workers) {
            records[i] = make_record(config, c, n_opt, config.n_min + static_cast<int>(i));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

void write_scan(const std::vector<ScanRecord>& records, Format format, std::ostream& out) {
  if (format == Format::kCsv) {
    out << kScanHeader << "\n";
    for (const auto& r : records) {
      out << setting_name(r.setting) << "," << r.n << "," << format_number(r.phi) << ","
          << format_number(r.kappa) << "," << format_cell(r.qfi) << "," << format_cell(r.f_lower)
          << "," << format_cell(r.sens_sigma_x) << "," << format_cell(r.sens_bell) << ","
          << format_cell(r.sens_opt) << "," << format_cell(r.n_opt) << "," << r.seed << "\n";
    }
    return;
  }
  json rows = json::array();
  for (const auto& r : records) {
    json row;
    row["setting"] = setting_name(r.setting);
    row["N"] = r.n;
    row["phi"] = number_json(r.phi);
    row["kappa"] = number_json(r.kappa);
    row["qfi"] = cell_json(r.qfi);
    row["f_lower"] = cell_json(r.f_lower);
    row["sens_sigma_x"] = cell_json(r.sens_sigma_x);
    row["sens_bell"] = cell_json(r.sens_bell);
    row["sens_opt"] = cell_json(r.sens_opt);
    row["n_opt"] = cell_json(r.n_opt);
    row["seed"] = r.seed;
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase estimation through noisy phase-covariant qubit channels"};
  app.name("phasecast");
  app.require_subcommand(1);

  CommonOptions scan_opts;
  CLI::App* scan_cmd = app.add_subcommand("scan", "QFI, bounds and sensitivities over N");
  scan_opts.attach(scan_cmd);

  CommonOptions traj_opts;
  CLI::App* traj_cmd =
      app.add_subcommand("trajectory", "Bloch trajectory of the sequential probe with its SLD");
  traj_opts.attach(traj_cmd);

  CommonOptions info_opts;
  CLI::App* info_cmd = app.add_subcommand("channel-info", "Channel parameters at (phi, kappa)");
  info_opts.attach(info_cmd);

  std::vector<double> phis = default_phis();
  std::vector<double> kappas = default_kappas();
  std::string contour_format = "csv";
  CLI::App* contour_cmd =
      app.add_subcommand("nopt-contour", "Optimal round count estimate over a (phi, kappa) grid");
  contour_cmd->add_option("--phis", phis, "Comma list of phases")->delimiter(',');
  contour_cmd->add_option("--kappas", kappas, "Comma list of concentrations")->delimiter(',');
  contour_cmd->add_option("--format", contour_format, "csv | json");

  std::string validate_seed;
  ValidationOptions validation;
  bool inject_failure = false;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Run every oracle cross-check");
  validate_cmd->add_option("--seed", validate_seed, "64-bit seed (falls back to PHASECAST_SEED)");
  validate_cmd->add_option("--mc-samples", validation.mc_samples,
                           "Samples for the Monte Carlo comparison");
  validate_cmd->add_flag("--inject-failure", inject_failure)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*scan_cmd) {
      const ScanConfig config = scan_opts.resolve();
      write_scan(scan(config), config.format, out);
    } else if (*traj_cmd) {
      const ScanConfig config = traj_opts.resolve();
      if (config.setting != Setting::kSequential) {
        throw InvalidInput("trajectory supports the sequential setting only");
      }
      write_trajectory(config, channel_for(config), out);
    } else if (*info_cmd) {
      const ScanConfig config = info_opts.resolve();
      write_channel_info(config, channel_for(config), out);
    } else if (*contour_cmd) {
      write_contour(phis, kappas, parse_format(contour_format), out);
    } else if (*validate_cmd) {
      if (!validate_seed.empty()) {
        validation.seed = parse_seed(validate_seed, "--seed");
      } else if (const char* env = std::getenv("PHASECAST_SEED")) {
        validation.seed = parse_seed(env, "PHASECAST_SEED");
      }
      if (inject_failure) validation.tolerance_scale = 0.0;
      return report_validation(validation, out, err);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "numeric domain error: " << e.what() << "\n";
    return kNumericDomain;
  }
  return kOk;
}

}  // namespace phasecast::cli
