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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "phasecast/linalg.hpp"
#include "phasecast/random.hpp"
#include "phasecast/state.hpp"

namespace phasecast {

// Concentration and phase of the von Mises-Fisher generator channel.
struct VmfParams {
  double kappa = 1.0;  // >= 0
  double phi = 0.0;    // radians
};

// Unital phase-covariant qubit channel at a fixed phase, together with the
// first derivatives of its parameters with respect to that phase.
//
// The coherence factor S = lambda_perp e^{-i g} multiplies rho_01 on every
// application; mu = arg S and nu = arg dS/dphi.
struct ChannelParams {
  double phi = 0.0;
  double lambda_par = 1.0;
  double lambda_perp = 1.0;
  double g = 0.0;
  double d_lambda_par = 0.0;
  double d_lambda_perp = 0.0;
  double d_g = 0.0;
  Complex S{1.0, 0.0};
  Complex dS{0.0, 0.0};
  double mu = 0.0;
  double nu = 0.0;
  // False when produced from a single-phase black box (derivatives unknown).
  bool has_derivatives = true;

  // Fills S, dS, mu and nu from the real parameters and their derivatives.
  static ChannelParams from_components(double phi, double lambda_par, double lambda_perp,
                                       double g, double d_lambda_par, double d_lambda_perp,
                                       double d_g);
  // Fills lambda_perp, g and their derivatives from S and dS.
  static ChannelParams from_coherence(double phi, double lambda_par, Complex S,
                                      double d_lambda_par, Complex dS);

  // lambda_par <= 1 and 2 lambda_perp <= 1 + lambda_par, within
  // tol::kCompletePositivity.
  bool completely_positive() const;
};

using Bloch3x3 = std::array<std::array<double, 3>, 3>;

struct KrausSet {
  std::vector<ComplexMatrix> operators;
  // Set when a slightly negative radicand was clamped to zero.
  bool clamped = false;

  // max-entry norm of sum_i K_i^dagger K_i - I.
  double completeness_defect() const;
  // sum_i K_i op K_i^dagger for any 2x2 operator.
  ComplexMatrix apply(const ComplexMatrix& op) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
};

// 4x4 action on vectorize() ordering.
struct LiouvilleMatrix {
  ComplexMatrix k{ComplexMatrix::identity(4)};
  VectorizedState apply(const VectorizedState& v) const;
};

// Linear map on single-qubit operators.
using QubitMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

// p_kappa(theta) = kappa e^{kappa cos theta} / (4 pi sinh kappa); the uniform
// density 1/(4 pi) at kappa = 0.
double vmf_density(double theta, double kappa);

// Unit axis with cos(theta) drawn by inverse CDF and uniform azimuth.
std::array<double, 3> sample_vmf(double kappa, CounterRng& rng);

// exp(-i phi n.sigma) = cos(phi) I - i sin(phi) n.sigma.
ComplexMatrix generator_unitary(const std::array<double, 3>& n, double phi);

// Monte Carlo estimate of the channel. Axes are regenerated from the seed on
// every call, so calls at different phases share the same random draws.
class MonteCarloChannel {
 public:
  MonteCarloChannel(double kappa, std::uint64_t samples, CounterRng rng, unsigned shards = 16);

  ComplexMatrix apply(const ComplexMatrix& op, double phi) const;
  // (Lambda (x) 1)|Psi+><Psi+|.
  ComplexMatrix choi(double phi) const;
  QubitMap at(double phi) const;

  std::uint64_t samples() const { return samples_; }
  std::uint64_t seed() const { return rng_.seed(); }

 private:
  template <typename Accumulate>
  ComplexMatrix run(std::size_t dim, double phi, Accumulate&& accumulate) const;

  double kappa_;
  std::uint64_t samples_;
  CounterRng rng_;
  unsigned shards_;
};

DensityMatrix apply_channel_mc(const DensityMatrix& rho, const VmfParams& p, std::uint64_t samples,
                               const CounterRng& rng);

// Closed-form vMF quantities.
double vmf_lambda_par(const VmfParams& p);
Complex vmf_coherence_factor(const VmfParams& p);
// alpha = (1 - lambda_par)/2 = 2 (kappa coth kappa - 1) sin^2 phi / kappa^2.
double vmf_alpha(const VmfParams& p);
KrausSet kraus_vmf(const VmfParams& p);
ChannelParams channel_params_vmf(const VmfParams& p);

LiouvilleMatrix liouville_from_params(const ChannelParams& c);
// d/dphi of liouville_from_params(c).
ComplexMatrix liouville_derivative(const ChannelParams& c);
// sum_i K_i (x) conj(K_i), acting on row-major vectorizations.
ComplexMatrix liouville_from_kraus(const KrausSet& kraus);
Bloch3x3 bloch_map(const ChannelParams& c);

ComplexMatrix choi_matrix(const QubitMap& map);
QubitMap as_map(const KrausSet& kraus);
QubitMap as_map(const LiouvilleMatrix& liouville);

// Reads (lambda_par, lambda_perp, g) off the images of |0><0| and |+><+|,
// after checking unitality and phase covariance within covariance_tol.
// Derivatives are left at zero and has_derivatives is false.
ChannelParams process_tomography(const QubitMap& map, double covariance_tol = 1e-6);
// As above for a phase-indexed family; derivatives by d_dphi.
ChannelParams process_tomography(const std::function<QubitMap(double)>& family, double phi,
                                 double covariance_tol = 1e-6);

// Continuity-unwraps a sequence of angles.
std::vector<double> unwrap_phases(std::vector<double> angles);

}  // namespace phasecast
