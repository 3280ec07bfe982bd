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
#include <cstddef>

#include "phasecast/linalg.hpp"

namespace phasecast {

// Hermitian, unit-trace, positive semidefinite matrix of dimension 2^n.
class DensityMatrix {
 public:
  // Validates Hermiticity, trace and positivity; throws InvalidInput.
  explicit DensityMatrix(ComplexMatrix m);

  // Skips the eigenvalue check. For outputs of maps already known to be
  // completely positive and trace preserving; Hermiticity and trace are still
  // enforced.
  static DensityMatrix trusted(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  std::size_t qubits() const;
  double purity() const;
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix m, NoCheck);
  ComplexMatrix m_;
};

struct BlochVector {
  std::array<double, 3> r{};
  double norm() const;
};

// (rho_00, rho_01, rho_10, rho_11).
struct VectorizedState {
  std::array<Complex, 4> v{};
};

VectorizedState vectorize(const DensityMatrix& rho);
// Accepts violations of Hermiticity and unit trace up to tol::kDevectorize.
DensityMatrix devectorize(const VectorizedState& v);

// Raw row-major vectorization used by Liouville maps; any dimension.
std::vector<Complex> vec(const ComplexMatrix& m);
ComplexMatrix unvec(std::span<const Complex> v);

BlochVector bloch_from_state(const DensityMatrix& rho);
// Throws InvalidInput when |r| > 1 + tol::kBlochNormInverse.
DensityMatrix state_from_bloch(const BlochVector& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

DensityMatrix plus_state();
DensityMatrix zero_state();
DensityMatrix maximally_mixed(std::size_t dim = 2);
// (|00> + sign |11>)/sqrt(2), sign = +1 or -1.
DensityMatrix bell_state(int sign = +1);
DensityMatrix ghz_state(std::size_t qubits);

// Partial traces of a two-qubit matrix.
ComplexMatrix trace_out_second(const ComplexMatrix& m);
ComplexMatrix trace_out_first(const ComplexMatrix& m);

}  // namespace phasecast
