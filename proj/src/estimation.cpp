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

#include "phasecast/estimation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phasecast/errors.hpp"
#include "phasecast/tolerances.hpp"

namespace phasecast {

namespace {

void require_rounds(int rounds) {
  if (rounds < 1) throw InvalidInput("number of rounds must be at least 1");
}

// 1 - x^n for 0 <= x < 1 without cancellation.
double one_minus_power(double x, double n) {
  if (x <= 0.0) return 1.0;
  return -std::expm1(n * std::log(x));
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
  }
  return t.real();
}

}  // namespace

StateWithDerivative::StateWithDerivative(DensityMatrix rho, ComplexMatrix drho)
    : rho_(std::move(rho)), drho_(std::move(drho)) {
  if (drho_.dim() != rho_.dim()) throw InvalidInput("StateWithDerivative: dimension mismatch");
  const double defect = drho_.hermiticity_defect();
  if (defect > tol::kHermitianInput) {
    std::ostringstream msg;
    msg << "StateWithDerivative: derivative is not Hermitian (defect " << defect << ")";
    throw InvalidInput(msg.str());
  }
  if (std::abs(drho_.trace()) > tol::kHermitianInput) {
    std::ostringstream msg;
    msg << "StateWithDerivative: derivative has trace " << std::abs(drho_.trace());
    throw InvalidInput(msg.str());
  }
}

double fisher_sum(std::span<const double> q, const ComplexMatrix& m) {
  double f = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double qi = std::max(q[i], 0.0);
      const double sum = qi + std::max(q[j], 0.0);
      const double element = std::abs(m(i, j));
      if (sum <= tol::kEigenSum) {
        if (element > tol::kDroppedElement) {
          std::ostringstream msg;
          msg << "Fisher information: derivative element " << element
              << " couples a null eigenvalue pair (inconsistent state/derivative)";
          throw DomainError(msg.str());
        }
        continue;
      }
      f += 4.0 * qi / (sum * sum) * element * element;
    }
  }
  return f;
}

namespace {

struct Eigenframe {
  EigenSystem eig;
  ComplexMatrix drho_in_frame;  // V^dagger drho V
};

Eigenframe eigenframe(const StateWithDerivative& s) {
  Eigenframe f{hermitian_eig(s.rho().matrix()), ComplexMatrix(s.rho().dim())};
  if (f.eig.values.front() < tol::kNegativeEigenvalue) {
    std::ostringstream msg;
    msg << "state has negative eigenvalue " << f.eig.values.front();
    throw InvalidInput(msg.str());
  }
  f.drho_in_frame = f.eig.vectors.adjoint() * s.drho() * f.eig.vectors;
  return f;
}

}  // namespace

double qfi_eigen(const StateWithDerivative& s) {
  const auto f = eigenframe(s);
  return fisher_sum(f.eig.values, f.drho_in_frame);
}

ComplexMatrix sld(const StateWithDerivative& s) {
  const auto f = eigenframe(s);
  const std::size_t n = s.rho().dim();
  ComplexMatrix in_frame(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sum = std::max(f.eig.values[i], 0.0) + std::max(f.eig.values[j], 0.0);
      if (sum <= tol::kEigenSum) continue;
      in_frame(i, j) = 2.0 * f.drho_in_frame(i, j) / sum;
    }
  }
  return (f.eig.vectors * in_frame * f.eig.vectors.adjoint()).hermitian_part();
}

Sensitivity observable_sensitivity(const StateWithDerivative& s, const ComplexMatrix& observable) {
  if (observable.dim() != s.rho().dim()) {
    throw InvalidInput("observable_sensitivity: dimension mismatch");
  }
  if (observable.hermiticity_defect() > tol::kHermitianInput) {
    throw InvalidInput("observable_sensitivity: observable is not Hermitian");
  }
  const ComplexMatrix& rho = s.rho().matrix();
  const double mean = trace_product(rho, observable);
  const double second = trace_product(rho, observable * observable);
  const double variance = second - mean * mean;
  const double slope = trace_product(s.drho(), observable);
  if (variance <= tol::kVariance) {
    if (std::abs(slope) <= tol::kProbabilityDerivative) return Sensitivity::of(0.0);
    return Sensitivity::divergent();
  }
  return Sensitivity::of(slope * slope / variance);
}

Sensitivity classical_fisher(const StateWithDerivative& s, const ComplexMatrix& basis) {
  const std::size_t n = s.rho().dim();
  if (basis.dim() != n) throw InvalidInput("classical_fisher: dimension mismatch");
  const double resolution =
      max_abs_diff(basis * basis.adjoint(), ComplexMatrix::identity(n));
  if (resolution > tol::kResolution) {
    std::ostringstream msg;
    msg << "classical_fisher: projectors do not resolve the identity (defect " << resolution
        << ")";
    throw InvalidInput(msg.str());
  }
  const ComplexMatrix p = basis.adjoint() * s.rho().matrix() * basis;
  const ComplexMatrix dp = basis.adjoint() * s.drho() * basis;
  double info = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prob = p(i, i).real();
    const double slope = dp(i, i).real();
    if (prob <= tol::kProbability) {
      if (std::abs(slope) > tol::kProbabilityDerivative) return Sensitivity::divergent();
      continue;
    }
    info += slope * slope / prob;
  }
  return Sensitivity::of(info);
}

double qfi_sequential_general(int rounds, const ChannelParams& c) {
  require_rounds(rounds);
  const double n = rounds;
  const double lam = c.lambda_perp;
  if (lam < 0.0) throw InvalidInput("qfi_sequential_general: lambda_perp must be non-negative");
  const double coherent = std::pow(lam, 2 * n) * c.d_g * c.d_g;
  if (lam >= 1.0) {
    if (c.d_lambda_perp != 0.0) {
      throw DomainError("qfi_sequential_general: lambda_perp >= 1 with nonzero derivative");
    }
    return n * n * coherent;
  }
  const double decay =
      c.d_lambda_perp * c.d_lambda_perp * std::pow(lam, 2 * n - 2) / one_minus_power(lam, 2 * n);
  return n * n * (coherent + decay);
}

double qfi_sequential_vmf(int rounds, const ChannelParams& c) {
  require_rounds(rounds);
  const double n = rounds;
  const double s = std::abs(c.S);
  if (s >= 1.0) throw DomainError("qfi_sequential_vmf: requires |S| < 1");
  const double ratio = std::abs(c.dS) / s;
  const double s2n = std::pow(s, 2 * n);
  const double sn = std::sin(c.nu - c.mu);
  return n * n * s2n * ratio * ratio * (1.0 - s2n * sn * sn) / one_minus_power(s, 2 * n);
}

double lower_bound_f(int rounds, const ChannelParams& c) {
  require_rounds(rounds);
  const double n = rounds;
  const double lam = c.lambda_perp;
  return n * n * std::pow(lam, 2 * n - 2) *
         (lam * lam * c.d_g * c.d_g + c.d_lambda_perp * c.d_lambda_perp);
}

int n_opt_estimate(const ChannelParams& c) {
  if (!(c.lambda_perp > 0.0) || c.lambda_perp >= 1.0) {
    std::ostringstream msg;
    msg << "n_opt_estimate: no finite optimum for lambda_perp = " << c.lambda_perp;
    throw DomainError(msg.str());
  }
  const double estimate = -1.0 / std::log(c.lambda_perp);
  if (estimate > 2e9) throw DomainError("n_opt_estimate: optimum exceeds integer range");
  return std::max(1, static_cast<int>(std::lround(estimate)));
}

double f_at_nopt(const ChannelParams& c) {
  if (!(c.lambda_perp > 0.0) || c.lambda_perp >= 1.0) {
    throw DomainError("f_at_nopt: requires 0 < lambda_perp < 1");
  }
  const double r = c.d_lambda_perp / (std::numbers::e * c.lambda_perp * std::log(c.lambda_perp));
  return r * r;
}

EtaSpectrum eta_eigenvalues(int rounds, const ChannelParams& c) {
  require_rounds(rounds);
  const double n = rounds;
  EtaSpectrum eta;
  eta.eta2 = n * n * std::pow(c.lambda_par, 2 * n - 2) * c.d_lambda_par * c.d_lambda_par;
  eta.eta34 = lower_bound_f(rounds, c);
  eta.norm_is_lower_bound = eta.eta2 < eta.eta34;
  return eta;
}

Sensitivity sigma_x_sensitivity_closed(int rounds, const ChannelParams& c) {
  require_rounds(rounds);
  const double n = rounds;
  const double s = std::abs(c.S);
  if (s > 1.0 + tol::kCompletePositivity) {
    throw DomainError("sigma_x_sensitivity_closed: requires |S| <= 1");
  }
  const double s2n = std::pow(s, 2 * n);
  const double aligned = std::cos(c.nu + (n - 1) * c.mu);
  const double readout = std::cos(n * c.mu);
  // 1 - |S|^{2N} cos^2(N mu), split so that |S| -> 1 keeps its precision.
  const double denominator =
      s < 1.0 ? one_minus_power(s, 2 * n) + s2n * (1.0 - readout * readout)
              : 1.0 - readout * readout;
  const double numerator =
      n * n * std::pow(s, 2 * n - 2) * std::norm(c.dS) * aligned * aligned;
  if (denominator <= tol::kDenominator) {
    if (numerator <= tol::kDenominator) return Sensitivity::of(0.0);
    return Sensitivity::divergent();
  }
  return Sensitivity::of(numerator / denominator);
}

int argmax_rounds(const std::function<double(int)>& fn, int n_min, int n_max) {
  if (n_min > n_max) throw InvalidInput("argmax_rounds: empty range");
  int best = n_min;
  double best_value = fn(n_min);
  for (int n = n_min + 1; n <= n_max; ++n) {
    const double v = fn(n);
    if (v > best_value) {
      best = n;
      best_value = v;
    }
  }
  return best;
}

}  // namespace phasecast
