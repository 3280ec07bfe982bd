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

#include "phasecast/state.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "phasecast/errors.hpp"
#include "phasecast/tolerances.hpp"

namespace phasecast {

namespace {

void check_shape_and_trace(const ComplexMatrix& m) {
  if (!std::has_single_bit(m.dim())) {
    throw InvalidInput("DensityMatrix: dimension must be a power of two");
  }
  const double defect = m.hermiticity_defect();
  if (defect > tol::kHermitian) {
    std::ostringstream msg;
    msg << "DensityMatrix: not Hermitian (defect " << defect << ")";
    throw InvalidInput(msg.str());
  }
  const Complex t = m.trace();
  if (std::abs(t - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << t.real() << " differs from 1";
    throw InvalidInput(msg.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  check_shape_and_trace(m_);
  const auto eig = hermitian_eig(m_);
  if (eig.values.front() < tol::kNegativeEigenvalue) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << eig.values.front();
    throw InvalidInput(msg.str());
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) {
  // Rounding from long evolutions is bounded well below the tolerance, so the
  // Hermitian part is taken rather than failing on the last ulp.
  ComplexMatrix h = m.hermitian_part();
  check_shape_and_trace(h);
  return DensityMatrix(std::move(h), NoCheck{});
}

std::size_t DensityMatrix::qubits() const { return std::countr_zero(m_.dim()); }

double DensityMatrix::purity() const {
  double p = 0.0;
  for (const auto& e : m_.entries()) p += std::norm(e);
  return p;
}

double BlochVector::norm() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }

VectorizedState vectorize(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw InvalidInput("vectorize: single-qubit state required");
  return VectorizedState{{rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1)}};
}

DensityMatrix devectorize(const VectorizedState& v) {
  const auto& e = v.v;
  if (std::abs(e[1] - std::conj(e[2])) > tol::kDevectorize ||
      std::abs(e[0].imag()) > tol::kDevectorize || std::abs(e[3].imag()) > tol::kDevectorize) {
    throw InvalidInput("devectorize: coherences are not complex conjugates");
  }
  if (std::abs(e[0] + e[3] - 1.0) > tol::kDevectorize) {
    throw InvalidInput("devectorize: populations do not sum to 1");
  }
  ComplexMatrix m{e[0], e[1], e[2], e[3]};
  // Small violations are projected away so the result is an exact state.
  ComplexMatrix h = m.hermitian_part();
  const double shift = 0.5 * (1.0 - h.trace().real());
  h(0, 0) += shift;
  h(1, 1) += shift;
  if (max_abs_diff(h, m) == 0.0) return DensityMatrix(std::move(m));
  return DensityMatrix(std::move(h));
}

std::vector<Complex> vec(const ComplexMatrix& m) {
  return std::vector<Complex>(m.entries().begin(), m.entries().end());
}

ComplexMatrix unvec(std::span<const Complex> v) {
  const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(double(v.size()))));
  return ComplexMatrix(dim, std::vector<Complex>(v.begin(), v.end()));
}

BlochVector bloch_from_state(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw InvalidInput("bloch_from_state: single-qubit state required");
  // r_k = tr(rho sigma_k)
  return BlochVector{{2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
                      (rho(0, 0) - rho(1, 1)).real()}};
}

DensityMatrix state_from_bloch(const BlochVector& b) {
  const double n = b.norm();
  if (n > 1.0 + tol::kBlochNormInverse) {
    std::ostringstream msg;
    msg << "state_from_bloch: |r| = " << n << " exceeds 1";
    throw InvalidInput(msg.str());
  }
  const auto& r = b.r;
  ComplexMatrix m{0.5 * (1.0 + r[2]), Complex(0.5 * r[0], -0.5 * r[1]),
                  Complex(0.5 * r[0], 0.5 * r[1]), 0.5 * (1.0 - r[2])};
  return DensityMatrix::trusted(std::move(m));
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return ComplexMatrix{0.0, 1.0, 1.0, 0.0}; }
ComplexMatrix y() { return ComplexMatrix{0.0, Complex(0, -1), Complex(0, 1), 0.0}; }
ComplexMatrix z() { return ComplexMatrix{1.0, 0.0, 0.0, -1.0}; }
}  // namespace pauli

DensityMatrix plus_state() { return DensityMatrix(ComplexMatrix{0.5, 0.5, 0.5, 0.5}); }

DensityMatrix zero_state() { return DensityMatrix(ComplexMatrix{1.0, 0.0, 0.0, 0.0}); }

DensityMatrix maximally_mixed(std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= 1.0 / double(dim);
  return DensityMatrix::trusted(std::move(m));
}

DensityMatrix bell_state(int sign) {
  if (sign != 1 && sign != -1) throw InvalidInput("bell_state: sign must be +1 or -1");
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> psi{s, 0.0, 0.0, sign * s};
  return DensityMatrix::trusted(ComplexMatrix::outer(psi, psi));
}

DensityMatrix ghz_state(std::size_t qubits) {
  if (qubits == 0 || qubits > 12) throw InvalidInput("ghz_state: 1..12 qubits supported");
  const std::size_t dim = std::size_t{1} << qubits;
  ComplexMatrix m(dim);
  m(0, 0) = m(0, dim - 1) = m(dim - 1, 0) = m(dim - 1, dim - 1) = 0.5;
  return DensityMatrix::trusted(std::move(m));
}

ComplexMatrix trace_out_second(const ComplexMatrix& m) {
  if (m.dim() != 4) throw InvalidInput("trace_out_second: two-qubit matrix required");
  ComplexMatrix out(2);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t c = 0; c < 2; ++c) out(a, c) = m(2 * a, 2 * c) + m(2 * a + 1, 2 * c + 1);
  }
  return out;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m) {
  if (m.dim() != 4) throw InvalidInput("trace_out_first: two-qubit matrix required");
  ComplexMatrix out(2);
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t d = 0; d < 2; ++d) out(b, d) = m(b, d) + m(2 + b, 2 + d);
  }
  return out;
}

}  // namespace phasecast
