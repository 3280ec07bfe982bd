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

#include <functional>
#include <span>
#include <string>

#include "phasecast/channel.hpp"
#include "phasecast/linalg.hpp"
#include "phasecast/state.hpp"

namespace phasecast {

// A probe state and its derivative with respect to the phase (per radian).
class StateWithDerivative {
 public:
  // drho must be Hermitian and traceless within 1e-10.
  StateWithDerivative(DensityMatrix rho, ComplexMatrix drho);

  const DensityMatrix& rho() const { return rho_; }
  const ComplexMatrix& drho() const { return drho_; }

 private:
  DensityMatrix rho_;
  ComplexMatrix drho_;
};

// Phase sensitivity of an estimator. `indeterminate` marks points where the
// estimator variance vanishes while its mean still moves with the phase.
struct Sensitivity {
  double value = 0.0;
  bool indeterminate = false;

  static Sensitivity of(double v) { return {v, false}; }
  static Sensitivity divergent() { return {0.0, true}; }
};

// Eigenvalues of (d K^N)^dagger d K^N for the Liouville matrix K.
struct EtaSpectrum {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta34 = 0.0;  // doubly degenerate
  // eta2 < eta34: the operator norm then equals the lower bound f_N.
  bool norm_is_lower_bound = false;
};

// Fisher sum over a given spectrum q and derivative m expressed in its eigenbasis.
// Pairs with q_i+q_j <= 1e-12 are dropped; a dropped |m_ij| above 1e-8 throws.
double fisher_sum(std::span<const double> q, const ComplexMatrix& m);
// 4 sum_ij q_i/(q_i+q_j)^2 |<psi_i|drho|psi_j>|^2 over the eigensystem of rho.
double qfi_eigen(const StateWithDerivative& s);
// Symmetric logarithmic derivative 2 sum_ij <psi_i|drho|psi_j>/(q_i+q_j) |psi_i><psi_j|.
ComplexMatrix sld(const StateWithDerivative& s);
// (d<O>)^2 / Var(O).
Sensitivity observable_sensitivity(const StateWithDerivative& s, const ComplexMatrix& observable);
// Classical Fisher information of measuring in the orthonormal basis given by
// the columns of `basis`.
Sensitivity classical_fisher(const StateWithDerivative& s, const ComplexMatrix& basis);

// Sequential setting, probe prepared in |+>, N rounds.
double qfi_sequential_general(int rounds, const ChannelParams& c);
double qfi_sequential_vmf(int rounds, const ChannelParams& c);
double lower_bound_f(int rounds, const ChannelParams& c);
int n_opt_estimate(const ChannelParams& c);
double f_at_nopt(const ChannelParams& c);
EtaSpectrum eta_eigenvalues(int rounds, const ChannelParams& c);
Sensitivity sigma_x_sensitivity_closed(int rounds, const ChannelParams& c);

// Smallest N in [n_min, n_max] maximizing fn.
int argmax_rounds(const std::function<double(int)>& fn, int n_min, int n_max);

}  // namespace phasecast
