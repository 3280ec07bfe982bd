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

#include <cstdint>
#include <vector>

#include "phasecast/channel.hpp"
#include "phasecast/estimation.hpp"
#include "phasecast/linalg.hpp"
#include "phasecast/state.hpp"

namespace phasecast {

// --- sequential -----------------------------------------------------------

DensityMatrix evolve_sequential(const DensityMatrix& rho0, int rounds, const KrausSet& kraus);
DensityMatrix evolve_sequential(const DensityMatrix& rho0, int rounds,
                                const LiouvilleMatrix& liouville);
// Exact state and phase derivative after N rounds, propagated through the
// Liouville matrix and its derivative.
StateWithDerivative sequential_tangent(const DensityMatrix& rho0, int rounds,
                                       const ChannelParams& c);

struct TrajectoryPoint {
  int rounds = 0;
  BlochVector bloch;
  // Equatorial angle of the SLD's positive eigenvector; 0 when the SLD vanishes.
  double sld_angle = 0.0;
};

// Entries for N = 0..n_max, probe prepared in |+>.
std::vector<TrajectoryPoint> bloch_trajectory(int n_max, const ChannelParams& c);

// --- ancilla --------------------------------------------------------------

// Probe (first qubit) entangled with a passive ancilla (second qubit).
class AncillaState {
 public:
  // Both single-qubit marginals must be maximally mixed within 1e-10.
  explicit AncillaState(DensityMatrix rho);
  const DensityMatrix& rho() const { return rho_; }

 private:
  DensityMatrix rho_;
};

// (Lambda (x) 1) applied to a two-qubit operator.
ComplexMatrix apply_on_probe(const ComplexMatrix& liouville, const ComplexMatrix& op);

AncillaState evolve_with_ancilla(int rounds, const LiouvilleMatrix& liouville, int sign = +1);
StateWithDerivative ancilla_tangent(int rounds, const ChannelParams& c, int sign = +1);
double qfi_ancilla_closed(int rounds, const ChannelParams& c);
// |Psi+><Psi+| - |Psi-><Psi-|.
ComplexMatrix bell_observable();
Sensitivity bell_observable_sensitivity(int rounds, const ChannelParams& c, int sign = +1);
Sensitivity separable_sensitivity_ancilla(int rounds, const ChannelParams& c, int sign = +1);

// --- parallel -------------------------------------------------------------

// N-qubit X-state: diagonal entries depend only on the Hamming weight of the
// basis label, plus one corner coherence at (0, 2^N - 1).
class XStateN {
 public:
  // weight_diagonal[w] is the entry for every label of Hamming weight w.
  XStateN(int qubits, std::vector<double> weight_diagonal, Complex corner);

  int qubits() const { return qubits_; }
  const std::vector<double>& weight_diagonal() const { return weight_diagonal_; }
  double diagonal(std::uint64_t label) const;
  Complex corner() const { return corner_; }
  double trace() const;
  // Dense 2^N x 2^N matrix; N <= 12.
  ComplexMatrix to_dense() const;

 private:
  int qubits_;
  std::vector<double> weight_diagonal_;
  Complex corner_;
};

// An X-state together with its phase derivative (same sparsity).
struct XStateTangent {
  XStateN state;
  std::vector<double> d_weight_diagonal;
  Complex d_corner;
};

double alpha_param(const ChannelParams& c);
double alpha_param(const VmfParams& p);

XStateN ghz_output_state(int qubits, const ChannelParams& c);
XStateTangent ghz_output_tangent(int qubits, const ChannelParams& c);
// Lambda^{(x)N} on the GHZ projector by dense evolution, with derivative; N <= 10.
StateWithDerivative ghz_dense_tangent(int qubits, const ChannelParams& c);

struct XStateEigen {
  // Ascending; includes multiplicities. N <= 20.
  std::vector<double> values;
};
XStateEigen xstate_eigensystem(const XStateN& x);

// QFI from the X-state structure (interior diagonal plus the corner block).
double qfi_xstate(const XStateTangent& t);
double qfi_parallel_closed(int qubits, const ChannelParams& c);
Sensitivity sigma_x_tensor_sensitivity(int qubits, const ChannelParams& c);

// Apply a single-qubit superoperator (4x4 Liouville matrix) to qubit j of an
// n-qubit operator; qubit 0 is the most significant bit of the label.
ComplexMatrix apply_local(const ComplexMatrix& op, int qubits, int j,
                          const ComplexMatrix& liouville);

}  // namespace phasecast
