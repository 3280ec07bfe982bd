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


#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "phasecast/errors.hpp"
#include "phasecast/linalg.hpp"
#include "phasecast/oracles.hpp"
#include "phasecast/random.hpp"
#include "phasecast/state.hpp"

namespace phasecast {
namespace {

double reconstruction_error(const ComplexMatrix& m, const EigenSystem& e) {
  std::vector<Complex> d(e.values.begin(), e.values.end());
  const ComplexMatrix r = e.vectors * ComplexMatrix::diagonal(d) * e.vectors.adjoint();
  return max_abs_diff(r, m);
}

TEST(HermitianEig, DiagonalInputIsUnchanged) {
  const ComplexMatrix m{1.0, 0.0, 0.0, 2.0};
  const EigenSystem e = hermitian_eig(m);
  EXPECT_DOUBLE_EQ(e.values[0], 1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0);
  EXPECT_LT(max_abs_diff(e.vectors, ComplexMatrix::identity(2)), 1e-15);
}

TEST(HermitianEig, PauliX) {
  const EigenSystem e = hermitian_eig(pauli::x());
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
}

TEST(HermitianEig, RandomFourByFourReconstructs) {
  CounterRng rng(42);
  const ComplexMatrix m = oracle::random_hermitian(4, rng);
  const EigenSystem e = hermitian_eig(m);
  EXPECT_LT(reconstruction_error(m, e), 4e-10);
  EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(4)), 1e-10);
}

TEST(HermitianEig, MatchesEigenOnRandomMatrices) {
  CounterRng rng(11);
  for (std::size_t dim : {2u, 3u, 4u, 7u, 16u, 64u}) {
    const ComplexMatrix m = oracle::random_hermitian(dim, rng);
    Eigen::MatrixXcd em(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) em(i, j) = m(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
    const EigenSystem e = hermitian_eig(m);
    for (std::size_t i = 0; i < dim; ++i) {
      EXPECT_NEAR(e.values[i], solver.eigenvalues()(i), 1e-10 * dim) << "dim " << dim;
    }
    EXPECT_LT(reconstruction_error(m, e), 1e-10 * dim);
  }
}

TEST(HermitianEig, TraceAndDeterminant) {
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + trial % 3;
    const ComplexMatrix m = oracle::random_hermitian(dim, rng);
    const EigenSystem e = hermitian_eig(m);
    double sum = 0.0, product = 1.0;
    for (double v : e.values) {
      sum += v;
      product *= v;
    }
    EXPECT_NEAR(sum, m.trace().real(), 1e-10);
    EXPECT_NEAR(product, determinant(m).real(), 1e-8);
  }
}

TEST(HermitianEig, DegenerateSpectrumStaysOrthonormal) {
  const ComplexMatrix m = ComplexMatrix::identity(4) + kron(pauli::z(), ComplexMatrix::identity(2));
  const EigenSystem e = hermitian_eig(m);
  EXPECT_NEAR(e.values[0], 0.0, 1e-15);
  EXPECT_NEAR(e.values[3], 2.0, 1e-15);
  EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(4)), 1e-12);
}

TEST(HermitianEig, RejectsNonHermitianWithDiagnostic) {
  const ComplexMatrix m{1.0, 1.0, 0.0, 1.0};
  try {
    hermitian_eig(m);
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(HermitianEig2, MatchesGeneralSolver) {
  const Complex c{0.3, -0.4};
  const auto [lo, hi] = hermitian_eig2(0.2, 0.7, c);
  const EigenSystem e = hermitian_eig(ComplexMatrix{0.2, c, std::conj(c), 0.7});
  EXPECT_NEAR(lo, e.values[0], 1e-15);
  EXPECT_NEAR(hi, e.values[1], 1e-15);
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_EQ(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4));
}

TEST(Kron, DoubleBitFlip) {
  const std::vector<Complex> ket00{1.0, 0.0, 0.0, 0.0};
  const auto out = kron(pauli::x(), pauli::x()).apply(ket00);
  EXPECT_EQ(out, (std::vector<Complex>{0.0, 0.0, 0.0, 1.0}));
}

TEST(Kron, DiagonalLayout) {
  const std::vector<Complex> ab{2.0, 3.0}, cd{5.0, 7.0};
  const std::vector<Complex> expected{10.0, 14.0, 15.0, 21.0};
  EXPECT_EQ(kron(ComplexMatrix::diagonal(ab), ComplexMatrix::diagonal(cd)),
            ComplexMatrix::diagonal(expected));
}

TEST(Kron, MixedProductAndAssociativity) {
  CounterRng rng(9);
  auto random = [&] {
    ComplexMatrix m(2);
    for (auto& z : m.entries()) z = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    return m;
  };
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix a = random(), b = random(), c = random(), d = random();
    EXPECT_LT(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
    EXPECT_LT(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
  }
}

TEST(ComplexMatrix, RejectsNonSquareInitializer) {
  EXPECT_THROW((ComplexMatrix{1.0, 2.0, 3.0}), InvalidInput);
}

}  // namespace
}  // namespace phasecast
