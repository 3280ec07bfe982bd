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

#include "phasecast/channel.hpp"
#include "phasecast/errors.hpp"
#include "phasecast/estimation.hpp"
#include "phasecast/oracles.hpp"
#include "phasecast/settings.hpp"

namespace phasecast {
namespace {

ChannelParams reference() { return channel_params_vmf({1.0, 0.1}); }

ChannelParams noiseless(double phi = 0.2) {
  return ChannelParams::from_components(phi, 1.0, 1.0, 2.0 * phi, 0.0, 0.0, 2.0);
}

TEST(QfiEigen, ZeroDerivative) {
  const StateWithDerivative s(plus_state(), ComplexMatrix(2));
  EXPECT_EQ(qfi_eigen(s), 0.0);
  EXPECT_LT(sld(s).max_abs(), 1e-15);
}

TEST(QfiEigen, RejectsBadDerivative) {
  EXPECT_THROW(StateWithDerivative(plus_state(), pauli::identity()), InvalidInput);
  EXPECT_THROW(StateWithDerivative(plus_state(), ComplexMatrix{0.0, 1.0, 0.0, 0.0}),
               InvalidInput);
}

TEST(QfiEigen, PureStateRotation) {
  // |psi> = (|0> + e^{2 i phi}|1>)/sqrt2, F = 4
  const double phi = 0.3;
  const Complex e = std::exp(Complex(0.0, 2.0 * phi));
  const ComplexMatrix rho{0.5, 0.5 * std::conj(e), 0.5 * e, 0.5};
  const ComplexMatrix drho{0.0, Complex(0, -1) * std::conj(e), Complex(0, 1) * e, 0.0};
  const StateWithDerivative s(DensityMatrix(rho), drho);
  EXPECT_NEAR(qfi_eigen(s), 4.0, 1e-12);
  EXPECT_LT(max_abs_diff(sld(s), 2.0 * drho), 1e-12);
}

TEST(QfiEigen, SequentialOracleAtTwenty) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 20);
  EXPECT_NEAR(qfi_eigen(series[19]), qfi_sequential_vmf(20, reference()), 1e-6);
}

TEST(QfiEigen, DegenerateSubspaceInvariance) {
  CounterRng rng(31);
  // spectrum {0.35, 0.35, 0.2, 0.1} with a random unitary mixing inside the degenerate pair
  for (int trial = 0; trial < 5; ++trial) {
    const EigenSystem basis = hermitian_eig(oracle::random_hermitian(4, rng));
    const std::vector<Complex> q{0.35, 0.35, 0.2, 0.1};
    const ComplexMatrix v = basis.vectors;
    const ComplexMatrix rho = v * ComplexMatrix::diagonal(q) * v.adjoint();
    ComplexMatrix drho = oracle::random_hermitian(4, rng);
    drho -= ComplexMatrix::identity(4) * (drho.trace() / 4.0);
    const double base = qfi_eigen(StateWithDerivative(DensityMatrix(rho.hermitian_part()), drho));

    const double t = rng.uniform() * M_PI, a = rng.uniform() * M_PI;
    ComplexMatrix mix = ComplexMatrix::identity(4);
    mix(0, 0) = std::cos(t);
    mix(0, 1) = -std::sin(t) * std::exp(Complex(0, a));
    mix(1, 0) = std::sin(t) * std::exp(Complex(0, -a));
    mix(1, 1) = std::cos(t);
    const ComplexMatrix w = v * mix;
    const ComplexMatrix rho2 = w * ComplexMatrix::diagonal(q) * w.adjoint();
    EXPECT_LT(max_abs_diff(rho, rho2), 1e-12);
    const double mixed =
        qfi_eigen(StateWithDerivative(DensityMatrix(rho2.hermitian_part()), drho));
    EXPECT_NEAR(base, mixed, 1e-8);
  }
}

TEST(Sld, DefiningEquationResidual) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 10);
  const StateWithDerivative& s = series[9];
  const ComplexMatrix l = sld(s);
  const ComplexMatrix& rho = s.rho().matrix();
  const ComplexMatrix lhs = 0.5 * (rho * l + l * rho);
  EXPECT_LT(max_abs_diff(lhs, s.drho()), 1e-9);
  EXPECT_LT(std::abs((rho * l).trace()), 1e-9);
}

TEST(Sld, RandomStatesResidual) {
  CounterRng rng(12);
  for (std::size_t dim : {2u, 4u, 8u}) {
    const StateWithDerivative s = oracle::random_state_with_derivative(dim, rng);
    const ComplexMatrix l = sld(s);
    const ComplexMatrix& rho = s.rho().matrix();
    EXPECT_LT(max_abs_diff(0.5 * (rho * l + l * rho), s.drho()), 1e-9);
    EXPECT_NEAR((rho * l * l).trace().real(), qfi_eigen(s), 1e-9);
  }
}

TEST(ObservableSensitivity, Identity) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 3);
  const Sensitivity s = observable_sensitivity(series[2], pauli::identity());
  EXPECT_FALSE(s.indeterminate);
  EXPECT_EQ(s.value, 0.0);
}

TEST(ObservableSensitivity, SldIsOptimal) {
  CounterRng rng(13);
  for (int i = 0; i < 10; ++i) {
    const StateWithDerivative s = oracle::random_state_with_derivative(std::size_t{2} << (i % 3), rng);
    EXPECT_NEAR(observable_sensitivity(s, sld(s)).value, qfi_eigen(s), 1e-9);
    EXPECT_NEAR(classical_fisher(s, oracle::eigenbasis(sld(s))).value, qfi_eigen(s), 1e-8);
  }
}

TEST(ObservableSensitivity, DivergentWhenVarianceVanishes) {
  // |0><0| with a derivative in the diagonal: <Z> moves but Var(Z) = 0
  const StateWithDerivative s(zero_state(), ComplexMatrix{-1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(observable_sensitivity(s, pauli::z()).indeterminate);
}

TEST(ObservableSensitivity, SigmaXMatchesClosedForm) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 120);
  const ChannelParams c = reference();
  for (int n = 1; n <= 120; ++n) {
    const double brute = observable_sensitivity(series[n - 1], pauli::x()).value;
    const double closed = sigma_x_sensitivity_closed(n, c).value;
    EXPECT_NEAR(brute, closed, 1e-8 * std::max(1.0, closed)) << n;
  }
}

TEST(ClassicalFisher, SigmaXEqualsObservable) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 5);
  const double cf = classical_fisher(series[4], oracle::eigenbasis(pauli::x())).value;
  const double os = observable_sensitivity(series[4], pauli::x()).value;
  EXPECT_NEAR(cf, os, 1e-10);
}

TEST(ClassicalFisher, PhaseIndependentProbabilities) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 5);
  // populations never move under a phase-covariant unital channel on |+>
  EXPECT_NEAR(classical_fisher(series[4], oracle::eigenbasis(pauli::z())).value, 0.0, 1e-12);
}

TEST(ClassicalFisher, RejectsIncompleteBasis) {
  const auto series = oracle::sequential_series({1.0, 0.1}, 1);
  ComplexMatrix basis = ComplexMatrix::identity(2);
  basis(1, 1) = 0.5;
  EXPECT_THROW(classical_fisher(series[0], basis), InvalidInput);
}

TEST(Hierarchy, RandomObservables) {
  CounterRng rng(21);
  for (int i = 0; i < 20; ++i) {
    const StateWithDerivative s = oracle::random_state_with_derivative(std::size_t{2} << (i % 3), rng);
    const ComplexMatrix o = oracle::random_hermitian(s.rho().dim(), rng);
    const double fo = observable_sensitivity(s, o).value;
    const double io = classical_fisher(s, oracle::eigenbasis(o)).value;
    const double f = qfi_eigen(s);
    EXPECT_LE(fo, io + 1e-9);
    EXPECT_LE(io, f + 1e-9);
  }
}

TEST(SequentialQfi, Noiseless) {
  for (int n : {1, 2, 7, 100}) {
    EXPECT_NEAR(qfi_sequential_general(n, noiseless()), 4.0 * n * n, 1e-9 * n * n);
    EXPECT_NEAR(lower_bound_f(n, noiseless()), 4.0 * n * n, 1e-9 * n * n);
  }
}

TEST(SequentialQfi, SingleRound) {
  const ChannelParams c = reference();
  const double l = c.lambda_perp;
  const double want = l * l * c.d_g * c.d_g + c.d_lambda_perp * c.d_lambda_perp / (1 - l * l);
  EXPECT_NEAR(qfi_sequential_general(1, c), want, 1e-12);
  EXPECT_LE(l * l * c.d_g * c.d_g + c.d_lambda_perp * c.d_lambda_perp,
            qfi_sequential_general(1, c));
}

TEST(SequentialQfi, GeneralAndVmfFormsAgree) {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    for (double phi : {0.05, 0.1, 0.3, 1.0}) {
      const ChannelParams c = channel_params_vmf({k, phi});
      for (int n : {1, 2, 10, 85, 300}) {
        const double a = qfi_sequential_general(n, c), b = qfi_sequential_vmf(n, c);
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, b));
      }
    }
  }
}

TEST(SequentialQfi, AlignedDerivativeReduces) {
  const double l = 0.97;
  const auto c = ChannelParams::from_coherence(0.1, 0.99, Complex(l, 0.0), -0.01,
                                               Complex(-0.2, 0.0));
  for (int n : {1, 5, 30}) {
    const double ratio = std::norm(c.dS / c.S);
    const double want = n * n * std::pow(l, 2 * n) * ratio / (1 - std::pow(l, 2 * n));
    EXPECT_NEAR(qfi_sequential_vmf(n, c), want, 1e-10 * want);
  }
}

TEST(SequentialQfi, RejectsNoiselessWithDecay) {
  const auto c = ChannelParams::from_components(0.1, 1.0, 1.0, 0.2, 0.0, 0.3, 2.0);
  EXPECT_THROW(qfi_sequential_general(3, c), DomainError);
  EXPECT_THROW(qfi_sequential_vmf(3, noiseless()), DomainError);
}

// Independent high-precision evaluation of the closed form at phi = 0.1,
// kappa = 1 (50-digit arithmetic).
constexpr double kF82 = 457.18983629, kF83 = 457.23104982, kF84 = 457.14707177,
                 kF85 = 456.94083706, kLower84 = 448.47105204, kLower85 = 448.49817372;

TEST(SequentialQfi, ReferenceValues) {
  const ChannelParams c = reference();
  EXPECT_NEAR(qfi_sequential_vmf(82, c), kF82, 1e-7);
  EXPECT_NEAR(qfi_sequential_vmf(83, c), kF83, 1e-7);
  EXPECT_NEAR(qfi_sequential_vmf(84, c), kF84, 1e-7);
  EXPECT_NEAR(qfi_sequential_vmf(85, c), kF85, 1e-7);
  EXPECT_NEAR(lower_bound_f(84, c), kLower84, 1e-7);
  EXPECT_NEAR(lower_bound_f(85, c), kLower85, 1e-7);
}

TEST(SequentialQfi, PeakLocation) {
  const ChannelParams c = reference();
  EXPECT_GE(qfi_sequential_vmf(84, c), qfi_sequential_vmf(85, c));
  const int peak = argmax_rounds([&](int n) { return qfi_sequential_vmf(n, c); }, 1, 300);
  EXPECT_EQ(peak, 83);
  const int bound_peak = argmax_rounds([&](int n) { return lower_bound_f(n, c); }, 1, 300);
  EXPECT_EQ(bound_peak, 85);
}

TEST(SequentialQfi, DecaysAtLargeN) {
  const ChannelParams c = reference();
  const double peak = qfi_sequential_vmf(83, c);
  EXPECT_LT(qfi_sequential_vmf(2000, c), 1e-3 * peak);
}

TEST(SequentialQfi, QuadraticGrowthAtSmallN) {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    for (double phi : {0.05, 0.1, 0.3}) {
      const ChannelParams c = channel_params_vmf({k, phi});
      const int limit = std::max(1, n_opt_estimate(c) / 10);
      const double lead = c.lambda_perp * c.lambda_perp * c.d_g * c.d_g;
      for (int n = 1; n <= limit; ++n) {
        EXPECT_GE(qfi_sequential_vmf(n, c),
                  0.9 * n * n * std::pow(c.lambda_perp, 2 * n - 2) * lead);
      }
    }
  }
}

TEST(LowerBound, DominatedByQfi) {
  for (double k : {0.5, 1.0, 2.0, 5.0}) {
    for (double phi : {0.05, 0.1, 0.3, 1.0}) {
      const ChannelParams c = channel_params_vmf({k, phi});
      for (int n = 1; n <= 500; ++n) {
        const double f = qfi_sequential_general(n, c);
        EXPECT_LE(lower_bound_f(n, c), f + 1e-12);
        EXPECT_LE(f, 4.0 * n * n + 1e-9);
      }
    }
  }
}

TEST(NOpt, Examples) {
  auto with_perp = [](double l, double dl) {
    return ChannelParams::from_components(0.1, 0.9, l, 0.2, 0.0, dl, 2.0);
  };
  EXPECT_EQ(n_opt_estimate(with_perp(std::exp(-1.0 / 85), 0.0)), 85);
  EXPECT_EQ(n_opt_estimate(with_perp(std::exp(-1.0), 0.0)), 1);
  EXPECT_EQ(n_opt_estimate(reference()), 85);
  EXPECT_THROW(n_opt_estimate(noiseless()), DomainError);

  EXPECT_EQ(f_at_nopt(with_perp(0.5, 0.0)), 0.0);
  EXPECT_NEAR(f_at_nopt(with_perp(std::exp(-1.0), 1.0)), 1.0, 1e-12);
  const ChannelParams c = reference();
  EXPECT_GT(lower_bound_f(85, c), f_at_nopt(c));
}

TEST(Eta, IdentityChannel) {
  const auto c = ChannelParams::from_components(0.0, 1, 1, 0, 0, 0, 0);
  const EtaSpectrum e = eta_eigenvalues(5, c);
  EXPECT_EQ(e.eta1, 0.0);
  EXPECT_EQ(e.eta2, 0.0);
  EXPECT_EQ(e.eta34, 0.0);
}

TEST(Eta, MatchesMatrixPower) {
  for (double phi : {0.1, 0.5}) {
    const ChannelParams c = channel_params_vmf({1.0, phi});
    for (int n : {1, 3, 20, 85}) {
      const EtaSpectrum e = eta_eigenvalues(n, c);
      std::array<double, 4> mine{e.eta1, e.eta2, e.eta34, e.eta34};
      std::sort(mine.begin(), mine.end());
      const auto ref = oracle::eta_matrix_power(n, c);
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(mine[i], ref[i], 1e-9 * std::max(1.0, ref[i]));
      EXPECT_NEAR(e.eta34, lower_bound_f(n, c), 1e-9 * std::max(1.0, e.eta34));
    }
  }
}

TEST(SigmaX, AlignedSaturatesQfi) {
  const double l = 0.95;
  const auto c = ChannelParams::from_coherence(0.0, 0.99, Complex(l, 0.0), -0.01,
                                               Complex(-0.3, 0.0));
  for (int n : {1, 4, 9}) {
    EXPECT_NEAR(sigma_x_sensitivity_closed(n, c).value, qfi_sequential_vmf(n, c), 1e-10);
  }
}

TEST(SigmaX, ZeroCountFollowsRotation) {
  // zeros of the sensitivity are sign changes of d<sigma_x>/dphi
  const ChannelParams c = reference();
  int zeros = 0;
  double prev = 0.0;
  for (int n = 1; n <= 120; ++n) {
    const StateWithDerivative s = sequential_tangent(plus_state(), n, c);
    const double slope = (pauli::x() * s.drho()).trace().real();
    if (n > 1 && prev * slope < 0.0) ++zeros;
    prev = slope;
  }
  const double expected = 120.0 * std::abs(c.mu) / M_PI;
  EXPECT_GE(zeros, 1);
  EXPECT_LE(std::abs(zeros - expected), 1.0);
}

TEST(ArgmaxRounds, TiesGoToFewerRounds) {
  EXPECT_EQ(argmax_rounds([](int n) { return n == 4 || n == 6 ? 1.0 : 0.0; }, 1, 10), 4);
  EXPECT_EQ(argmax_rounds([](int n) { return -std::abs(n - 7.0); }, 1, 10), 7);
}

}  // namespace
}  // namespace phasecast
