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

#include "phasecast/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "phasecast/channel.hpp"
#include "phasecast/estimation.hpp"
#include "phasecast/oracles.hpp"
#include "phasecast/random.hpp"
#include "phasecast/settings.hpp"

namespace phasecast {

double relative_deviation(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

CheckResult run_check(const std::string& name, double tolerance, double scale,
                      const std::function<double(std::string&)>& body) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance * scale;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.deviation = body(r.detail);
    r.passed = std::isfinite(r.deviation) && r.deviation <= r.tolerance;
  } catch (const std::exception& e) {
    r.deviation = std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + e.what();
    r.passed = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

const VmfParams kReference{1.0, 0.1};

struct GridPoint {
  double phi;
  double kappa;
};

std::vector<GridPoint> grid(std::initializer_list<double> phis,
                            std::initializer_list<double> kappas) {
  std::vector<GridPoint> g;
  for (double p : phis) {
    for (double k : kappas) g.push_back({p, k});
  }
  return g;
}

std::string describe(const char* what, double at) {
  std::ostringstream s;
  s << what << " " << at;
  return s.str();
}

// Keeps the worst deviation and where it happened.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (!(v <= value)) {
      value = v;
      where = w;
    }
  }
};

double vmf_normalization(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (double k : {0.1, 0.5, 1.0, 5.0, 50.0}) {
    worst.update(std::abs(oracle::vmf_normalization_quadrature(k) - 1.0), describe("kappa", k));
  }
  detail = worst.where;
  return worst.value;
}

double vmf_moment(const ValidationOptions&, std::string& detail) {
  // <cos theta> recovered from the Kraus-level lambda_par.
  Worst worst;
  for (const auto& [phi, k] : grid({0.3, 1.0}, {0.5, 1.0, 5.0})) {
    const double s = std::sin(phi);
    const double from_kraus = k * (1.0 - vmf_lambda_par({k, phi})) / (4.0 * s * s);
    worst.update(std::abs(oracle::vmf_mean_cos_quadrature(k) - from_kraus),
                 describe("kappa", k));
  }
  detail = worst.where;
  return worst.value;
}

double kraus_completeness(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.01, 0.1, 0.7, 1.5, 3.0}, {1e-3, 0.5, 1.0, 10.0, 1e3})) {
    worst.update(kraus_vmf({k, phi}).completeness_defect(), describe("phi", phi));
  }
  detail = worst.where;
  return worst.value;
}

double kraus_vs_liouville(const ValidationOptions& o, std::string& detail) {
  CounterRng rng(o.seed, 1);
  const KrausSet kraus = kraus_vmf(kReference);
  const LiouvilleMatrix l = liouville_from_params(channel_params_vmf(kReference));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = oracle::random_density(2, rng);
    const ComplexMatrix a = kraus.apply(rho.matrix());
    const ComplexMatrix b = unvec(l.k.apply(vec(rho.matrix())));
    worst = std::max(worst, max_abs_diff(a, b));
  }
  detail = "50 random states";
  return worst;
}

double kraus_vs_montecarlo(const ValidationOptions& o, std::string& detail) {
  const MonteCarloChannel mc(kReference.kappa, o.mc_samples, CounterRng(o.seed, 2));
  const ComplexMatrix exact = choi_matrix(as_map(kraus_vmf(kReference)));
  detail = describe("samples", static_cast<double>(o.mc_samples));
  return max_abs_diff(mc.choi(kReference.phi), exact);
}

double coherence_direct(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0, 2.0}, {0.5, 1.0, 2.0, 5.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    const oracle::DirectChannel d = oracle::direct_channel({k, phi});
    const double dev = std::max({std::abs(c.S - d.S) / std::max(1.0, std::abs(d.S)),
                                 std::abs(c.dS - d.dS) / std::max(1.0, std::abs(d.dS)),
                                 relative_deviation(c.lambda_par, d.lambda_par),
                                 relative_deviation(c.d_lambda_par, d.d_lambda_par)});
    worst.update(dev, describe("phi", phi));
  }
  detail = worst.where;
  return worst.value;
}

double sequential_closed(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  const auto states = oracle::sequential_series(kReference, 200);
  Worst worst;
  for (int n = 1; n <= 200; ++n) {
    worst.update(relative_deviation(qfi_sequential_vmf(n, c), qfi_eigen(states[n - 1])),
                 describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double sequential_forms(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0}, {0.5, 1.0, 2.0, 5.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    for (int n : {1, 2, 10, 100, 500}) {
      worst.update(relative_deviation(qfi_sequential_general(n, c), qfi_sequential_vmf(n, c)),
                   describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double sequential_tangent_vs_fd(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  const auto states = oracle::sequential_series(kReference, 60);
  Worst worst;
  for (int n = 1; n <= 60; ++n) {
    const StateWithDerivative t = sequential_tangent(plus_state(), n, c);
    worst.update(std::max(max_abs_diff(t.rho().matrix(), states[n - 1].rho().matrix()),
                          max_abs_diff(t.drho(), states[n - 1].drho())),
                 describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double ancilla_closed(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  const auto states = oracle::ancilla_series(kReference, 60);
  Worst worst;
  for (int n = 1; n <= 60; ++n) {
    worst.update(relative_deviation(qfi_ancilla_closed(n, c), qfi_eigen(states[n - 1])),
                 describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double ancilla_marginals(const ValidationOptions&, std::string& detail) {
  const LiouvilleMatrix l = liouville_from_params(channel_params_vmf(kReference));
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  Worst worst;
  for (int sign : {+1, -1}) {
    for (int n : {0, 1, 7, 60, 200}) {
      const auto s = evolve_with_ancilla(n, l, sign);
      worst.update(std::max(max_abs_diff(trace_out_first(s.rho().matrix()), half),
                            max_abs_diff(trace_out_second(s.rho().matrix()), half)),
                   describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double ancilla_sign(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  Worst worst;
  for (int n = 1; n <= 30; ++n) {
    const double plus = qfi_eigen(ancilla_tangent(n, c, +1));
    const double minus = qfi_eigen(ancilla_tangent(n, c, -1));
    worst.update(relative_deviation(plus, minus), describe("N", n));
    const Sensitivity bp = bell_observable_sensitivity(n, c, +1);
    const Sensitivity bm = bell_observable_sensitivity(n, c, -1);
    worst.update(relative_deviation(bp.value, bm.value), describe("bell N", n));
  }
  detail = worst.where;
  return worst.value;
}

double parallel_closed(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  Worst worst;
  for (int n = 2; n <= 8; ++n) {
    worst.update(relative_deviation(qfi_parallel_closed(n, c),
                                    qfi_eigen(oracle::ghz_state_fd(kReference, n))),
                 describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double parallel_structure(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0}, {0.5, 1.0, 2.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    for (int n : {1, 2, 3, 10, 40, 150}) {
      worst.update(relative_deviation(qfi_xstate(ghz_output_tangent(n, c)),
                                      qfi_parallel_closed(n, c)),
                   describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double xstate_dense(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  Worst worst;
  for (int n = 1; n <= 8; ++n) {
    const XStateN x = ghz_output_state(n, c);
    const StateWithDerivative dense = ghz_dense_tangent(n, c);
    worst.update(max_abs_diff(x.to_dense(), dense.rho().matrix()), describe("state N", n));
    const auto structured = xstate_eigensystem(x).values;
    const auto full = hermitian_eig(x.to_dense()).values;
    double d = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) d = std::max(d, std::abs(structured[i] - full[i]));
    worst.update(d, describe("eigenvalues N", n));
  }
  detail = worst.where;
  return worst.value;
}

double separable_chain(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3}, {0.5, 1.0, 2.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    for (int n = 1; n <= 60; ++n) {
      const double single = sigma_x_sensitivity_closed(n, c).value;
      const double pair = separable_sensitivity_ancilla(n, c).value;
      const double ghz = sigma_x_tensor_sensitivity(n, c).value;
      const double brute =
          observable_sensitivity(sequential_tangent(plus_state(), n, c), pauli::x()).value;
      worst.update(std::max({relative_deviation(pair, single), relative_deviation(ghz, single),
                             relative_deviation(brute, single)}),
                   describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double bound_dominance(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0}, {0.5, 1.0, 2.0, 5.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    for (int n = 1; n <= 500; ++n) {
      worst.update(std::max(0.0, lower_bound_f(n, c) - qfi_sequential_vmf(n, c)),
                   describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double ordering(const ValidationOptions&, std::string& detail) {
  // Ancilla never below sequential; parallel above sequential past its peak.
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3}, {0.5, 1.0, 2.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    const int peak =
        argmax_rounds([&](int n) { return qfi_sequential_vmf(n, c); }, 1, 5000);
    for (int n = 1; n <= 120; ++n) {
      const double seq = qfi_sequential_vmf(n, c);
      worst.update(std::max(0.0, seq - qfi_ancilla_closed(n, c)), describe("ancilla N", n));
    }
    for (int n = peak; n <= 2 * peak; n += std::max(1, peak / 20)) {
      worst.update(std::max(0.0, qfi_sequential_vmf(n, c) - qfi_parallel_closed(n, c)),
                   describe("parallel N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double single_round(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0}, {0.5, 1.0, 2.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    const double seq = qfi_sequential_vmf(1, c);
    worst.update(relative_deviation(qfi_parallel_closed(1, c), seq), describe("phi", phi));
    worst.update(relative_deviation(qfi_sequential_general(1, c), seq), describe("phi", phi));
  }
  detail = worst.where;
  return worst.value;
}

double eta_check(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.1, 1.0}, {0.5, 1.0, 5.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    for (int n : {1, 3, 20, 85}) {
      const EtaSpectrum e = eta_eigenvalues(n, c);
      std::array<double, 4> closed{e.eta1, e.eta2, e.eta34, e.eta34};
      std::sort(closed.begin(), closed.end());
      const auto brute = oracle::eta_matrix_power(n, c);
      const double top = std::max(1.0, brute[3]);
      double d = 0.0;
      for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(closed[i] - brute[i]) / top);
      worst.update(d, describe("N", n));
    }
  }
  detail = worst.where;
  return worst.value;
}

double nopt_consistency(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.02, 0.05, 0.1, 0.3, 1.0}, {0.2, 0.5, 1.0, 2.0, 5.0})) {
    const ChannelParams c = channel_params_vmf({k, phi});
    const int est = n_opt_estimate(c);
    const int arg = argmax_rounds([&](int n) { return lower_bound_f(n, c); }, 1, 4 * est + 10);
    worst.update(std::abs(est - arg), describe("phi", phi));
  }
  detail = worst.where;
  return worst.value;
}

double hierarchy(const ValidationOptions& o, std::string& detail) {
  CounterRng rng(o.seed, 3);
  Worst worst;
  for (int i = 0; i < 20; ++i) {
    const std::size_t dim = i % 2 ? 4 : 2;
    const StateWithDerivative s = oracle::random_state_with_derivative(dim, rng);
    const ComplexMatrix obs = oracle::random_hermitian(dim, rng);
    const double f_obs = observable_sensitivity(s, obs).value;
    const double i_obs = classical_fisher(s, oracle::eigenbasis(obs)).value;
    const double qfi = qfi_eigen(s);
    worst.update(std::max({0.0, f_obs - i_obs, i_obs - qfi}), describe("sample", i));
  }
  detail = worst.where;
  return worst.value;
}

double sigma_x_equality(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  Worst worst;
  for (int n = 1; n <= 120; ++n) {
    const StateWithDerivative s = sequential_tangent(plus_state(), n, c);
    const double f_obs = observable_sensitivity(s, pauli::x()).value;
    const double i_obs = classical_fisher(s, oracle::eigenbasis(pauli::x())).value;
    worst.update(relative_deviation(f_obs, i_obs), describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double sld_equation(const ValidationOptions& o, std::string& detail) {
  CounterRng rng(o.seed, 4);
  Worst worst;
  for (int i = 0; i < 10; ++i) {
    const StateWithDerivative s = oracle::random_state_with_derivative(i % 2 ? 4 : 2, rng);
    const ComplexMatrix l = sld(s);
    const ComplexMatrix lhs = l * s.rho().matrix() + s.rho().matrix() * l;
    worst.update(max_abs_diff(lhs, 2.0 * s.drho()), describe("sample", i));
    // Tr(rho L^2) is the QFI.
    const double from_sld = (s.rho().matrix() * l * l).trace().real();
    worst.update(relative_deviation(from_sld, qfi_eigen(s)), describe("trace sample", i));
  }
  detail = worst.where;
  return worst.value;
}

double identity_channel(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (double k : {0.5, 1.0, 10.0}) {
    const ChannelParams c = channel_params_vmf({k, 0.0});
    worst.update(std::max({std::abs(c.lambda_par - 1.0), std::abs(c.lambda_perp - 1.0),
                           std::abs(c.g)}),
                 describe("kappa", k));
  }
  detail = worst.where;
  return worst.value;
}

double heisenberg_limit(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf({1e3, 0.1});
  Worst worst;
  for (int n = 1; n <= 20; ++n) {
    const double heisenberg = 4.0 * n * n;
    worst.update(std::abs(qfi_sequential_vmf(n, c) - heisenberg) / heisenberg, describe("N", n));
  }
  detail = worst.where;
  return worst.value;
}

double trajectory(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  const auto points = bloch_trajectory(300, c);
  Worst worst;
  for (const auto& p : points) {
    worst.update(std::abs(p.bloch.norm() - std::pow(std::abs(c.S), p.rounds)),
                 describe("N", p.rounds));
  }
  detail = worst.where;
  return worst.value;
}

double trajectory_rotation(const ValidationOptions&, std::string& detail) {
  const ChannelParams c = channel_params_vmf(kReference);
  const auto points = bloch_trajectory(1000, c);
  const double advance = std::remainder(points[1000].sld_angle - points[999].sld_angle,
                                        2.0 * std::numbers::pi);
  detail = "rounds 999 to 1000";
  return std::abs(advance + c.mu);
}

double alpha_forms(const ValidationOptions&, std::string& detail) {
  Worst worst;
  for (const auto& [phi, k] : grid({0.05, 0.1, 0.3, 1.0, 1.5}, {1e-3, 0.5, 1.0, 5.0})) {
    worst.update(std::abs(alpha_param(channel_params_vmf({k, phi})) - alpha_param(VmfParams{k, phi})),
                 describe("phi", phi));
  }
  detail = worst.where;
  return worst.value;
}

}  // namespace

const std::vector<RegisteredCheck>& registered_checks() {
  static const std::vector<RegisteredCheck> checks{
      {"channel.vmf_normalization", 1e-9, vmf_normalization},
      {"channel.vmf_first_moment", 1e-8, vmf_moment},
      {"channel.kraus_completeness", 1e-10, kraus_completeness},
      {"channel.kraus_vs_liouville", 1e-10, kraus_vs_liouville},
      {"channel.kraus_vs_montecarlo", 5e-3, kraus_vs_montecarlo},
      {"channel.coherence_vs_direct_average", 1e-6, coherence_direct},
      {"channel.alpha_dual_formula", 1e-10, alpha_forms},
      {"channel.identity_at_zero_phase", 1e-8, identity_channel},
      {"estimation.heisenberg_limit", 2e-2, heisenberg_limit},
      {"estimation.sld_equation", 1e-9, sld_equation},
      {"estimation.sensitivity_hierarchy", 1e-9, hierarchy},
      {"estimation.sigma_x_two_outcome_equality", 1e-10, sigma_x_equality},
      {"estimation.sequential_closed_vs_eigen", 1e-6, sequential_closed},
      {"estimation.sequential_general_vs_vmf", 1e-9, sequential_forms},
      {"estimation.bound_dominance", 1e-12, bound_dominance},
      {"estimation.eta_vs_matrix_power", 1e-9, eta_check},
      {"estimation.nopt_vs_bound_argmax", 1.0, nopt_consistency},
      {"settings.sequential_tangent_vs_kraus_fd", 1e-7, sequential_tangent_vs_fd},
      {"settings.ancilla_closed_vs_eigen", 1e-6, ancilla_closed},
      {"settings.ancilla_marginals", 1e-10, ancilla_marginals},
      {"settings.ancilla_sign_invariance", 1e-9, ancilla_sign},
      {"settings.parallel_closed_vs_eigen", 1e-6, parallel_closed},
      {"settings.parallel_structured_vs_closed", 1e-8, parallel_structure},
      {"settings.xstate_vs_dense", 1e-10, xstate_dense},
      {"settings.separable_equivalence", 1e-8, separable_chain},
      {"settings.ordering", 1e-9, ordering},
      {"settings.single_round_coincidence", 1e-9, single_round},
      {"settings.bloch_trajectory_norm", 1e-10, trajectory},
      {"settings.bloch_trajectory_rotation", 1e-6, trajectory_rotation},
  };
  return checks;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> results;
  for (const auto& check : registered_checks()) {
    results.push_back(run_check(check.name, check.tolerance, options.tolerance_scale,
                                [&](std::string& detail) { return check.body(options, detail); }));
  }
  return results;
}

}  // namespace phasecast
