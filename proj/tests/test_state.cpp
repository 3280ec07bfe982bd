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

#include <cmath>

#include "phasecast/derivative.hpp"
#include "phasecast/errors.hpp"
#include "phasecast/oracles.hpp"
#include "phasecast/random.hpp"
#include "phasecast/state.hpp"

namespace phasecast {
namespace {

void expect_vec(const VectorizedState& v, std::array<Complex, 4> want) {
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(v.v[i] - want[i]), 1e-15) << i;
}

TEST(Vectorize, BasicStates) {
  expect_vec(vectorize(maximally_mixed()), {0.5, 0.0, 0.0, 0.5});
  expect_vec(vectorize(plus_state()), {0.5, 0.5, 0.5, 0.5});
  expect_vec(vectorize(zero_state()), {1.0, 0.0, 0.0, 0.0});
}

TEST(Devectorize, BasicStates) {
  EXPECT_LT(max_abs_diff(devectorize({{0.5, 0.0, 0.0, 0.5}}).matrix(),
                         maximally_mixed().matrix()),
            1e-15);
  EXPECT_LT(max_abs_diff(devectorize({{1.0, 0.0, 0.0, 0.0}}).matrix(), zero_state().matrix()),
            1e-15);
}

TEST(Devectorize, RoundTrip) {
  CounterRng rng(7);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = oracle::random_density(2, rng);
    EXPECT_LT(max_abs_diff(devectorize(vectorize(rho)).matrix(), rho.matrix()), 1e-15);
  }
}

TEST(Devectorize, RejectsTraceViolation) {
  EXPECT_THROW(devectorize({{0.6, 0.0, 0.0, 0.5}}), InvalidInput);
  EXPECT_THROW(devectorize({{0.5, 0.1, 0.2, 0.5}}), InvalidInput);
}

TEST(Bloch, BasicStates) {
  const BlochVector plus = bloch_from_state(plus_state());
  EXPECT_NEAR(plus.r[0], 1.0, 1e-15);
  EXPECT_NEAR(plus.r[1], 0.0, 1e-15);
  EXPECT_NEAR(plus.r[2], 0.0, 1e-15);
  EXPECT_NEAR(bloch_from_state(maximally_mixed()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(bloch_from_state(zero_state()).r[2], 1.0, 1e-15);
}

TEST(Bloch, RoundTrip) {
  CounterRng rng(3);
  for (int i = 0; i < 50; ++i) {
    BlochVector b;
    for (double& x : b.r) x = 2.0 * rng.uniform() - 1.0;
    const double n = b.norm();
    if (n > 1.0) {
      for (double& x : b.r) x /= n;
    }
    const BlochVector back = bloch_from_state(state_from_bloch(b));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back.r[k], b.r[k], 1e-14);
  }
}

TEST(Bloch, RejectsUnphysical) {
  EXPECT_THROW(state_from_bloch({{1.0, 0.1, 0.0}}), InvalidInput);
  EXPECT_NO_THROW(state_from_bloch({{1.0 + 1e-10, 0.0, 0.0}}));
}

TEST(DensityMatrix, RejectsNegativeEigenvalue) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix{1.5, 0.0, 0.0, -0.5}), InvalidInput);
  EXPECT_THROW(DensityMatrix(ComplexMatrix{0.5, 0.0, 0.0, 0.6}), InvalidInput);
}

TEST(DensityMatrix, BellAndGhz) {
  EXPECT_NEAR(bell_state(+1).purity(), 1.0, 1e-15);
  EXPECT_LT(max_abs_diff(trace_out_second(bell_state(-1).matrix()),
                         maximally_mixed().matrix()),
            1e-15);
  const DensityMatrix ghz = ghz_state(3);
  EXPECT_EQ(ghz.qubits(), 3u);
  EXPECT_NEAR(ghz(0, 7).real(), 0.5, 1e-15);
}

TEST(CounterRng, Reproducible) {
  CounterRng a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  CounterRng c(99);
  EXPECT_NE(c.split(1)(), c.split(2)());
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(1);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum2 / n, 1.0 / 3.0, 5e-3);
}

TEST(Derivative, Sine) {
  const auto d = d_dphi(std::function<double(double)>([](double x) { return std::sin(x); }), 0.3);
  EXPECT_TRUE(d.stable);
  EXPECT_NEAR(d.value, std::cos(0.3), 1e-9);
}

TEST(Derivative, ComplexExponential) {
  const auto d = d_dphi(std::function<Complex(double)>([](double x) { return std::exp(Complex(0.0, 2.0 * x)); }), 0.7);
  EXPECT_LT(std::abs(d.value - Complex(0.0, 2.0) * std::exp(Complex(0.0, 1.4))), 1e-9);
}

TEST(Derivative, PhaseUnwrappedAcrossBranchCut) {
  const auto d = d_dphi_phase([](double x) { return std::remainder(3.0 * x, 2.0 * M_PI); },
                              M_PI / 3.0);
  EXPECT_NEAR(d.value, 3.0, 1e-9);
}

}  // namespace
}  // namespace phasecast
