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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace phasecast {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}
  explicit ComplexMatrix(std::size_t dim);
  // Row-major entries; the list length must be a perfect square.
  ComplexMatrix(std::initializer_list<Complex> entries);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

  std::size_t dim() const { return dim_; }
  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  ComplexMatrix adjoint() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix transpose() const;
  Complex trace() const;
  // Largest |m_ij - conj(m_ji)|.
  double hermiticity_defect() const;
  double max_abs() const;
  double frobenius_norm() const;
  // (m + m^dagger)/2.
  ComplexMatrix hermitian_part() const;

  std::vector<Complex> apply(std::span<const Complex> v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker product with the standard layout (a (x) b)_{(i k),(j l)} = a_ij b_kl.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian eigendecomposition m = V diag(values) V^dagger.
struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

// Cyclic complex Jacobi. Throws InvalidInput when m is not Hermitian within
// tol::kHermitianInput; the message carries the measured asymmetry.
EigenSystem hermitian_eig(const ComplexMatrix& m);

// Eigenvalues of a 2x2 Hermitian block [[a, c], [conj(c), d]], ascending.
std::pair<double, double> hermitian_eig2(double a, double d, Complex c);

Complex determinant(const ComplexMatrix& m);

}  // namespace phasecast
