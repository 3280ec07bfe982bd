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

#include "phasecast/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phasecast/errors.hpp"
#include "phasecast/settings.hpp"
#include "phasecast/state.hpp"

namespace phasecast::oracle {

namespace {

constexpr std::array<double, 4> kOffsets{-2.0, -1.0, 1.0, 2.0};
constexpr std::array<double, 4> kWeights{1.0, -8.0, 8.0, -1.0};

// Symmetrized, trace-free five-point derivative from four offset matrices.
ComplexMatrix stencil(const std::array<ComplexMatrix, 4>& at, double step) {
  ComplexMatrix d(at[0].dim());
  for (std::size_t i = 0; i < 4; ++i) d += kWeights[i] * at[i];
  d *= 1.0 / (12.0 * step);
  d = d.hermitian_part();
  const Complex shift = d.trace() / static_cast<double>(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) d(i, i) -= shift;
  return d;
}

ComplexMatrix kraus_on_probe(const KrausSet& kraus, const ComplexMatrix& rho) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  ComplexMatrix out(4);
  for (const auto& k : kraus.operators) {
    const ComplexMatrix big = kron(k, id);
    out += big * rho * big.adjoint();
  }
  return out;
}

template <typename Step>
std::vector<StateWithDerivative> series(const VmfParams& p, int n_max, double step,
                                        ComplexMatrix initial, Step&& advance) {
  if (n_max < 1) throw InvalidInput("oracle series: n_max must be at least 1");
  const KrausSet center = kraus_vmf(p);
  std::array<KrausSet, 4> shifted;
  for (std::size_t i = 0; i < 4; ++i) {
    shifted[i] = kraus_vmf({p.kappa, p.phi + kOffsets[i] * step});
  }
  ComplexMatrix rho = initial;
  std::array<ComplexMatrix, 4> at{initial, initial, initial, initial};
  std::vector<StateWithDerivative> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    rho = advance(center, rho);
    for (std::size_t i = 0; i < 4; ++i) at[i] = advance(shifted[i], at[i]);
    out.emplace_back(DensityMatrix::trusted(rho), stencil(at, step));
  }
  return out;
}

double normal(CounterRng& rng) {
  // Box-Muller; fully determined by the generator, unlike std::normal_distribution.
  const double u = rng.uniform_open_low();
  const double v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

// L(k) = coth k - 1/k and L(k)/k, with series near zero.
std::pair<double, double> langevin(double k) {
  if (k < 1e-2) {
    const double k2 = k * k;
    const double ratio = 1.0 / 3.0 - k2 / 45.0 + 2.0 * k2 * k2 / 945.0;
    return {k * ratio, ratio};
  }
  const double l = 1.0 / std::tanh(k) - 1.0 / k;
  return {l, l / k};
}

}  // namespace

std::vector<StateWithDerivative> sequential_series(const VmfParams& p, int n_max, double step) {
  return series(p, n_max, step, plus_state().matrix(),
                [](const KrausSet& k, const ComplexMatrix& rho) { return k.apply(rho); });
}

std::vector<StateWithDerivative> ancilla_series(const VmfParams& p, int n_max, int sign,
                                                double step) {
  return series(p, n_max, step, bell_state(sign).matrix(), kraus_on_probe);
}

StateWithDerivative ghz_state_fd(const VmfParams& p, int qubits, double step) {
  if (qubits < 1 || qubits > 10) throw InvalidInput("ghz_state_fd: 1..10 qubits");
  const ComplexMatrix ghz = ghz_state(static_cast<std::size_t>(qubits)).matrix();
  auto evolve = [&](double phi) {
    const ComplexMatrix l = liouville_from_kraus(kraus_vmf({p.kappa, phi}));
    ComplexMatrix rho = ghz;
    for (int j = 0; j < qubits; ++j) rho = apply_local(rho, qubits, j, l);
    return rho;
  };
  std::array<ComplexMatrix, 4> at;
  for (std::size_t i = 0; i < 4; ++i) at[i] = evolve(p.phi + kOffsets[i] * step);
  return {DensityMatrix::trusted(evolve(p.phi)), stencil(at, step)};
}

DirectChannel direct_channel(const VmfParams& p) {
  if (p.kappa < 0.0) throw InvalidInput("direct_channel: kappa must be non-negative");
  const auto [l, a] = langevin(p.kappa);
  const double c = std::cos(2.0 * p.phi);
  const double s = std::sin(2.0 * p.phi);
  DirectChannel d;
  d.lambda_par = c + (1.0 - c) * (1.0 - 2.0 * a);
  d.d_lambda_par = -4.0 * a * s;
  d.S = {c + (1.0 - c) * a, -s * l};
  d.dS = {-2.0 * s * (1.0 - a), -2.0 * c * l};
  return d;
}

ChannelParams direct_channel_params(const VmfParams& p) {
  const DirectChannel d = direct_channel(p);
  return ChannelParams::from_coherence(p.phi, d.lambda_par, d.S, d.d_lambda_par, d.dS);
}

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  const int n = std::max(2, intervals + (intervals % 2));
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

double vmf_mean_cos_quadrature(double kappa, int intervals) {
  return simpson(
      [kappa](double t) {
        return 2.0 * std::numbers::pi * std::sin(t) * std::cos(t) * vmf_density(t, kappa);
      },
      0.0, std::numbers::pi, intervals);
}

double vmf_normalization_quadrature(double kappa, int intervals) {
  return simpson(
      [kappa](double t) { return 2.0 * std::numbers::pi * std::sin(t) * vmf_density(t, kappa); },
      0.0, std::numbers::pi, intervals);
}

std::array<double, 4> eta_matrix_power(int rounds, const ChannelParams& c) {
  if (rounds < 1) throw InvalidInput("eta_matrix_power: rounds must be at least 1");
  const ComplexMatrix k = liouville_from_params(c).k;
  const ComplexMatrix dk = liouville_derivative(c);
  std::vector<ComplexMatrix> powers{ComplexMatrix::identity(4)};
  for (int i = 1; i < rounds; ++i) powers.push_back(powers.back() * k);
  ComplexMatrix d(4);
  for (int j = 0; j < rounds; ++j) d += powers[j] * dk * powers[rounds - 1 - j];
  const EigenSystem e = hermitian_eig((d.adjoint() * d).hermitian_part());
  return {e.values[0], e.values[1], e.values[2], e.values[3]};
}

ComplexMatrix random_hermitian(std::size_t dim, CounterRng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = {normal(rng), normal(rng)};
  return g.hermitian_part();
}

DensityMatrix random_density(std::size_t dim, CounterRng& rng) {
  ComplexMatrix g(dim);
  for (auto& z : g.entries()) z = {normal(rng), normal(rng)};
  ComplexMatrix rho = g * g.adjoint();
  // A small admixture of the identity keeps the state safely full rank.
  rho += (0.05 * rho.trace().real()) * ComplexMatrix::identity(dim);
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix(rho.hermitian_part());
}

StateWithDerivative random_state_with_derivative(std::size_t dim, CounterRng& rng) {
  DensityMatrix rho = random_density(dim, rng);
  ComplexMatrix d = random_hermitian(dim, rng);
  const Complex shift = d.trace() / static_cast<double>(dim);
  for (std::size_t i = 0; i < dim; ++i) d(i, i) -= shift;
  return {std::move(rho), d.hermitian_part()};
}

ComplexMatrix eigenbasis(const ComplexMatrix& observable) {
  return hermitian_eig(observable).vectors;
}

}  // namespace phasecast::oracle
