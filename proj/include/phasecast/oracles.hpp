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

// Brute-force reference computations. Everything here goes through the Kraus
// operators or direct averages over the rotation axis, never through the
// channel-parameter closed forms, so it can be used to check them.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "phasecast/channel.hpp"
#include "phasecast/estimation.hpp"
#include "phasecast/linalg.hpp"
#include "phasecast/random.hpp"

namespace phasecast::oracle {

inline constexpr double kStateStep = 1e-4;

// States after N = 1..n_max sequential rounds on |+>, derivatives by a
// five-point stencil in phi over Kraus-evolved states.
std::vector<StateWithDerivative> sequential_series(const VmfParams& p, int n_max,
                                                   double step = kStateStep);
std::vector<StateWithDerivative> ancilla_series(const VmfParams& p, int n_max, int sign = +1,
                                                double step = kStateStep);
// Kraus channel on every qubit of an N-qubit GHZ state; N <= 10.
StateWithDerivative ghz_state_fd(const VmfParams& p, int qubits, double step = kStateStep);

// Averages of the rotation over the axis distribution in closed form.
struct DirectChannel {
  double lambda_par = 1.0;
  double d_lambda_par = 0.0;
  Complex S{1.0, 0.0};
  Complex dS{0.0, 0.0};
};
DirectChannel direct_channel(const VmfParams& p);
ChannelParams direct_channel_params(const VmfParams& p);

// Composite Simpson rule; `intervals` is rounded up to an even number.
double simpson(const std::function<double(double)>& f, double a, double b, int intervals);
// <cos theta> of the axis distribution by quadrature.
double vmf_mean_cos_quadrature(double kappa, int intervals = 20000);
double vmf_normalization_quadrature(double kappa, int intervals = 20000);

// Ascending eigenvalues of (d K^N)^dagger (d K^N) with d K^N from the product rule.
std::array<double, 4> eta_matrix_power(int rounds, const ChannelParams& c);

// Random full-rank density matrix and a random Hermitian traceless direction.
StateWithDerivative random_state_with_derivative(std::size_t dim, CounterRng& rng);
ComplexMatrix random_hermitian(std::size_t dim, CounterRng& rng);
DensityMatrix random_density(std::size_t dim, CounterRng& rng);

// Eigenbasis (columns) of a Hermitian observable.
ComplexMatrix eigenbasis(const ComplexMatrix& observable);

}  // namespace phasecast::oracle
