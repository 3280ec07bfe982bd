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

#include "phasecast/settings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phasecast/errors.hpp"
#include "phasecast/tolerances.hpp"

namespace phasecast {

namespace {

void require_nonnegative(int rounds) {
  if (rounds < 0) throw InvalidInput("number of rounds must be non-negative");
}

void require_positive(int n) {
  if (n < 1) throw InvalidInput("number of rounds/probes must be at least 1");
}

Complex int_power(Complex z, long n) {
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

// coef * a^e1 * b^e2 with the convention 0 * anything = 0.
double monomial(double coef, double a, double e1, double b, double e2) {
  if (coef == 0.0) return 0.0;
  return coef * std::pow(a, e1) * std::pow(b, e2);
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// num / den where both may vanish together in a limit.
double guarded_ratio(double num, double den, const char* what) {
  if (den <= tol::kDenominator) {
    if (std::abs(num) <= tol::kDenominator) return 0.0;
    std::ostringstream msg;
    msg << what << ": denominator " << den << " vanishes with numerator " << num;
    throw DomainError(msg.str());
  }
  return num / den;
}

// 1 - x^n for real x, accurate when x^n is close to 1.
double one_minus_signed_power(double x, double n) {
  if (x > 0.0) return -std::expm1(n * std::log(x));
  return 1.0 - std::pow(x, n);
}

}  // namespace

// --- sequential -----------------------------------------------------------

DensityMatrix evolve_sequential(const DensityMatrix& rho0, int rounds, const KrausSet& kraus) {
  require_nonnegative(rounds);
  if (rho0.dim() != 2) throw InvalidInput("evolve_sequential: single-qubit state expected");
  DensityMatrix rho = rho0;
  for (int n = 0; n < rounds; ++n) rho = kraus.apply(rho);
  return rho;
}

DensityMatrix evolve_sequential(const DensityMatrix& rho0, int rounds,
                                const LiouvilleMatrix& liouville) {
  require_nonnegative(rounds);
  if (rho0.dim() != 2) throw InvalidInput("evolve_sequential: single-qubit state expected");
  if (rounds == 0) return rho0;
  VectorizedState v = vectorize(rho0);
  for (int n = 0; n < rounds; ++n) v = liouville.apply(v);
  return devectorize(v);
}

StateWithDerivative sequential_tangent(const DensityMatrix& rho0, int rounds,
                                       const ChannelParams& c) {
  require_nonnegative(rounds);
  if (rho0.dim() != 2) throw InvalidInput("sequential_tangent: single-qubit state expected");
  const ComplexMatrix k = liouville_from_params(c).k;
  const ComplexMatrix dk = liouville_derivative(c);
  std::vector<Complex> v = vec(rho0.matrix());
  std::vector<Complex> dv(4, 0.0);
  for (int n = 0; n < rounds; ++n) {
    std::vector<Complex> next_dv = k.apply(dv);
    const std::vector<Complex> from_channel = dk.apply(v);
    for (std::size_t i = 0; i < 4; ++i) next_dv[i] += from_channel[i];
    dv = std::move(next_dv);
    v = k.apply(v);
  }
  return {DensityMatrix::trusted(unvec(v)), unvec(dv).hermitian_part()};
}

std::vector<TrajectoryPoint> bloch_trajectory(int n_max, const ChannelParams& c) {
  require_positive(n_max);
  const ComplexMatrix k = liouville_from_params(c).k;
  const ComplexMatrix dk = liouville_derivative(c);
  std::vector<Complex> v = vec(plus_state().matrix());
  std::vector<Complex> dv(4, 0.0);
  std::vector<TrajectoryPoint> points;
  points.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const StateWithDerivative s{DensityMatrix::trusted(unvec(v)), unvec(dv).hermitian_part()};
    const ComplexMatrix l = sld(s);
    const double lx = l(0, 1).real();
    const double ly = -l(0, 1).imag();
    TrajectoryPoint p;
    p.rounds = n;
    p.bloch = bloch_from_state(s.rho());
    p.sld_angle = std::hypot(lx, ly) < tol::kProbabilityDerivative ? 0.0 : std::atan2(ly, lx);
    points.push_back(p);

    std::vector<Complex> next_dv = k.apply(dv);
    const std::vector<Complex> from_channel = dk.apply(v);
    for (std::size_t i = 0; i < 4; ++i) next_dv[i] += from_channel[i];
    dv = std::move(next_dv);
    v = k.apply(v);
  }
  return points;
}

// --- local superoperators -------------------------------------------------

ComplexMatrix apply_local(const ComplexMatrix& op, int qubits, int j,
                          const ComplexMatrix& liouville) {
  if (qubits < 1 || j < 0 || j >= qubits) throw InvalidInput("apply_local: bad qubit index");
  if (op.dim() != (std::size_t{1} << qubits) || liouville.dim() != 4) {
    throw InvalidInput("apply_local: dimension mismatch");
  }
  const std::size_t bit = std::size_t{1} << (qubits - 1 - j);
  const std::size_t dim = op.dim();
  ComplexMatrix out(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::size_t col = 0; col < dim; ++col) {
      if (col & bit) continue;
      Complex block[4];
      for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) block[2 * x + y] = op(r | (x * bit), col | (y * bit));
      }
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          Complex acc = 0.0;
          for (std::size_t e = 0; e < 4; ++e) acc += liouville(2 * a + b, e) * block[e];
          out(r | (a * bit), col | (b * bit)) = acc;
        }
      }
    }
  }
  return out;
}

// --- ancilla --------------------------------------------------------------

AncillaState::AncillaState(DensityMatrix rho) : rho_(std::move(rho)) {
  if (rho_.dim() != 4) throw InvalidInput("AncillaState: two-qubit state expected");
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  const double probe = max_abs_diff(trace_out_second(rho_.matrix()), half);
  const double ancilla = max_abs_diff(trace_out_first(rho_.matrix()), half);
  if (std::max(probe, ancilla) > tol::kHermitianInput) {
    std::ostringstream msg;
    msg << "AncillaState: marginals deviate from maximally mixed by "
        << std::max(probe, ancilla);
    throw InvalidInput(msg.str());
  }
}

ComplexMatrix apply_on_probe(const ComplexMatrix& liouville, const ComplexMatrix& op) {
  return apply_local(op, 2, 0, liouville);
}

AncillaState evolve_with_ancilla(int rounds, const LiouvilleMatrix& liouville, int sign) {
  require_nonnegative(rounds);
  ComplexMatrix rho = bell_state(sign).matrix();
  for (int n = 0; n < rounds; ++n) rho = apply_on_probe(liouville.k, rho);
  return AncillaState(DensityMatrix::trusted(std::move(rho)));
}

StateWithDerivative ancilla_tangent(int rounds, const ChannelParams& c, int sign) {
  require_nonnegative(rounds);
  const ComplexMatrix k = liouville_from_params(c).k;
  const ComplexMatrix dk = liouville_derivative(c);
  ComplexMatrix rho = bell_state(sign).matrix();
  ComplexMatrix drho(4);
  for (int n = 0; n < rounds; ++n) {
    drho = apply_on_probe(k, drho) + apply_on_probe(dk, rho);
    rho = apply_on_probe(k, rho);
  }
  return {DensityMatrix::trusted(std::move(rho)), drho.hermitian_part()};
}

double qfi_ancilla_closed(int rounds, const ChannelParams& c) {
  require_positive(rounds);
  const double n = rounds;
  const double lperp = c.lambda_perp;
  const double lpar = c.lambda_par;
  if (lperp < 0.0 || lperp > 1.0 + tol::kCompletePositivity) {
    throw DomainError("qfi_ancilla_closed: lambda_perp outside [0, 1]");
  }
  const double lp_n = std::pow(lperp, n);
  const double lq_n = std::pow(lpar, n);  // sign kept for lambda_par < 0
  const double lp_nm1 = std::pow(lperp, n - 1);
  const double lq_nm1 = std::pow(lpar, n - 1);
  const double om_p = lperp < 1.0 ? one_minus_signed_power(lperp, n) : 0.0;
  const double om_q = lpar < 1.0 ? one_minus_signed_power(lpar, n) : 0.0;

  const double perp_part = 2.0 * lp_nm1 * c.d_lambda_perp;
  const double par_part = lq_nm1 * c.d_lambda_par;
  const double d_plus = guarded_ratio((perp_part + par_part) * (perp_part + par_part),
                                      1.0 + 2.0 * lp_n + lq_n, "qfi_ancilla_closed");
  // 1 - 2 l_perp^N + l_par^N written as 2(1 - l_perp^N) - (1 - l_par^N).
  const double d_minus = guarded_ratio((perp_part - par_part) * (perp_part - par_part),
                                       2.0 * om_p - om_q, "qfi_ancilla_closed");
  const double phase = guarded_ratio(8.0 * lp_n * lp_n * c.d_g * c.d_g, 1.0 + lq_n,
                                     "qfi_ancilla_closed");
  double population = 0.0;
  if (lpar >= 1.0) {
    if (c.d_lambda_par != 0.0) {
      throw DomainError("qfi_ancilla_closed: lambda_par = 1 with nonzero derivative");
    }
  } else {
    population = 2.0 * lq_nm1 * lq_nm1 * c.d_lambda_par * c.d_lambda_par / om_q;
  }
  return 0.25 * n * n * (d_plus + d_minus + phase + population);
}

ComplexMatrix bell_observable() {
  ComplexMatrix o(4);
  o(0, 3) = 1.0;
  o(3, 0) = 1.0;
  return o;
}

Sensitivity bell_observable_sensitivity(int rounds, const ChannelParams& c, int sign) {
  return observable_sensitivity(ancilla_tangent(rounds, c, sign), bell_observable());
}

Sensitivity separable_sensitivity_ancilla(int rounds, const ChannelParams& c, int sign) {
  require_positive(rounds);
  return observable_sensitivity(ancilla_tangent(rounds, c, sign), kron(pauli::x(), pauli::x()));
}

// --- parallel -------------------------------------------------------------

XStateN::XStateN(int qubits, std::vector<double> weight_diagonal, Complex corner)
    : qubits_(qubits), weight_diagonal_(std::move(weight_diagonal)), corner_(corner) {
  if (qubits_ < 1) throw InvalidInput("XStateN: at least one qubit required");
  if (weight_diagonal_.size() != static_cast<std::size_t>(qubits_) + 1) {
    throw InvalidInput("XStateN: need one diagonal entry per Hamming weight");
  }
  for (double d : weight_diagonal_) {
    if (!(d >= -tol::kCompletePositivity)) throw InvalidInput("XStateN: negative diagonal entry");
  }
  const double t = trace();
  if (std::abs(t - 1.0) > tol::kHermitianInput) {
    std::ostringstream msg;
    msg << "XStateN: trace " << t << " differs from 1";
    throw InvalidInput(msg.str());
  }
  const double det = weight_diagonal_.front() * weight_diagonal_.back() - std::norm(corner_);
  if (det < -tol::kCompletePositivity) throw InvalidInput("XStateN: corner block not positive");
}

double XStateN::diagonal(std::uint64_t label) const {
  if (qubits_ < 64 && label >> qubits_) throw InvalidInput("XStateN: label out of range");
  return weight_diagonal_[static_cast<std::size_t>(std::popcount(label))];
}

double XStateN::trace() const {
  const double n = qubits_;
  double t = 0.0;
  for (int w = 0; w <= qubits_; ++w) {
    const double d = weight_diagonal_[w];
    if (d <= 0.0) continue;
    t += std::exp(log_binomial(n, w) + std::log(d));
  }
  return t;
}

ComplexMatrix XStateN::to_dense() const {
  if (qubits_ > 12) throw InvalidInput("XStateN::to_dense: at most 12 qubits");
  const std::size_t dim = std::size_t{1} << qubits_;
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = diagonal(i);
  m(0, dim - 1) += corner_;
  m(dim - 1, 0) += std::conj(corner_);
  return m;
}

double alpha_param(const ChannelParams& c) { return 0.5 * (1.0 - c.lambda_par); }

double alpha_param(const VmfParams& p) { return vmf_alpha(p); }

namespace {

double checked_alpha(const ChannelParams& c) {
  const double a = alpha_param(c);
  if (a < -tol::kCompletePositivity || a > 1.0 + tol::kCompletePositivity) {
    std::ostringstream msg;
    msg << "alpha = " << a << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return std::clamp(a, 0.0, 1.0);
}

}  // namespace

XStateN ghz_output_state(int qubits, const ChannelParams& c) {
  require_positive(qubits);
  const double a = checked_alpha(c);
  const double b = 1.0 - a;
  const double n = qubits;
  std::vector<double> diag(static_cast<std::size_t>(qubits) + 1);
  for (int w = 0; w <= qubits; ++w) {
    diag[w] = 0.5 * (std::pow(a, n - w) * std::pow(b, w) + std::pow(a, w) * std::pow(b, n - w));
  }
  return XStateN(qubits, std::move(diag), 0.5 * int_power(c.S, qubits));
}

XStateTangent ghz_output_tangent(int qubits, const ChannelParams& c) {
  XStateN x = ghz_output_state(qubits, c);
  const double a = checked_alpha(c);
  const double b = 1.0 - a;
  const double da = -0.5 * c.d_lambda_par;
  const double n = qubits;
  std::vector<double> d(static_cast<std::size_t>(qubits) + 1);
  for (int w = 0; w <= qubits; ++w) {
    const double dw = monomial(n - w, a, n - w - 1, b, w) - monomial(w, a, n - w, b, w - 1) +
                      monomial(w, a, w - 1, b, n - w) - monomial(n - w, a, w, b, n - w - 1);
    d[w] = 0.5 * da * dw;
  }
  const Complex dcorner = 0.5 * n * int_power(c.S, qubits - 1) * c.dS;
  return {std::move(x), std::move(d), dcorner};
}

StateWithDerivative ghz_dense_tangent(int qubits, const ChannelParams& c) {
  require_positive(qubits);
  if (qubits > 10) throw InvalidInput("ghz_dense_tangent: at most 10 qubits");
  const ComplexMatrix k = liouville_from_params(c).k;
  const ComplexMatrix dk = liouville_derivative(c);
  const ComplexMatrix ghz = ghz_state(static_cast<std::size_t>(qubits)).matrix();
  ComplexMatrix rho = ghz;
  for (int j = 0; j < qubits; ++j) rho = apply_local(rho, qubits, j, k);
  ComplexMatrix drho(ghz.dim());
  for (int d = 0; d < qubits; ++d) {
    ComplexMatrix term = ghz;
    for (int j = 0; j < qubits; ++j) term = apply_local(term, qubits, j, j == d ? dk : k);
    drho += term;
  }
  return {DensityMatrix::trusted(std::move(rho)), drho.hermitian_part()};
}

XStateEigen xstate_eigensystem(const XStateN& x) {
  const int n = x.qubits();
  if (n > 20) throw InvalidInput("xstate_eigensystem: at most 20 qubits");
  XStateEigen e;
  e.values.reserve(std::size_t{1} << n);
  for (int w = 1; w < n; ++w) {
    const auto count = static_cast<std::size_t>(std::llround(std::exp(log_binomial(n, w))));
    e.values.insert(e.values.end(), count, x.weight_diagonal()[w]);
  }
  const auto [lo, hi] =
      hermitian_eig2(x.weight_diagonal().front(), x.weight_diagonal().back(), x.corner());
  e.values.push_back(lo);
  e.values.push_back(hi);
  std::sort(e.values.begin(), e.values.end());
  return e;
}

double qfi_xstate(const XStateTangent& t) {
  const XStateN& x = t.state;
  const int n = x.qubits();
  if (t.d_weight_diagonal.size() != x.weight_diagonal().size()) {
    throw InvalidInput("qfi_xstate: derivative size mismatch");
  }
  double f = 0.0;
  for (int w = 1; w < n; ++w) {
    // Interior entries are exact eigenvalues, so only a true zero is dropped.
    const double q = x.weight_diagonal()[w];
    const double dq = t.d_weight_diagonal[w];
    if (q <= 0.0) {
      if (std::abs(dq) > tol::kDroppedElement) {
        throw DomainError("qfi_xstate: derivative couples a null eigenvalue");
      }
      continue;
    }
    f += std::exp(log_binomial(n, w)) * dq * dq / q;
  }
  const ComplexMatrix block{x.weight_diagonal().front(), x.corner(), std::conj(x.corner()),
                            x.weight_diagonal().back()};
  const ComplexMatrix dblock{t.d_weight_diagonal.front(), t.d_corner, std::conj(t.d_corner),
                             t.d_weight_diagonal.back()};
  const EigenSystem eig = hermitian_eig(block);
  const ComplexMatrix in_frame = eig.vectors.adjoint() * dblock * eig.vectors;
  return f + fisher_sum(eig.values, in_frame);
}

double qfi_parallel_closed(int qubits, const ChannelParams& c) {
  require_positive(qubits);
  if (qubits > 1000000) throw InvalidInput("qfi_parallel_closed: at most 10^6 probes");
  if (std::abs(std::remainder(c.phi, std::numbers::pi)) < tol::kParallelMinPhase) {
    std::ostringstream msg;
    msg << "qfi_parallel_closed: phi = " << c.phi << " is within " << tol::kParallelMinPhase
        << " of a multiple of pi; use |phi| >= 1e-3 or the dense path (N <= 8)";
    throw DomainError(msg.str());
  }
  const double a = alpha_param(c);
  const double b = 1.0 - a;
  const double lam = std::abs(c.S);
  if (!(a > 0.0 && a < 1.0)) throw DomainError("qfi_parallel_closed: requires 0 < alpha < 1");
  if (!(lam > 0.0 && lam < 1.0)) throw DomainError("qfi_parallel_closed: requires 0 < |S| < 1");

  const double n = qubits;
  const double da = -0.5 * c.d_lambda_par;
  const double r = std::abs(c.dS) / lam;
  const double delta = c.nu - c.mu;
  const double la = std::log(a);
  const double lb = std::log(b);
  const double ll = std::log(lam);

  // Corner block, everything scaled by exp(-m) so that large N cannot underflow.
  const double m = std::max({n * la, n * lb, n * ll});
  const double pa = std::exp(n * la - m);
  const double pb = std::exp(n * lb - m);
  const double pl = std::exp(n * ll - m);
  const double d = pa + pb;
  const double dd = n * da * (pa / a - pb / b);
  const double coherent = n * pl * r * std::cos(delta);
  const double gap = d - pl;
  if (gap <= tol::kDenominator * d) {
    throw DomainError("qfi_parallel_closed: corner block is singular; use |phi| >= 1e-3");
  }
  const double sn = std::sin(delta);
  double corner = n * n * pl * pl * r * r * sn * sn / d +
                  0.5 * (dd + coherent) * (dd + coherent) / (d + pl) +
                  0.5 * (dd - coherent) * (dd - coherent) / gap;
  corner *= std::exp(m);

  // Interior populations grouped by Hamming weight.
  const double scale = da * da / (2.0 * a * a * b * b);
  double interior = 0.0;
  for (int k = 1; k < qubits; ++k) {
    const double lu = (n - k) * la + k * lb;
    const double lv = k * la + (n - k) * lb;
    const double top = std::max(lu, lv);
    const double u = std::exp(lu - top);
    const double v = std::exp(lv - top);
    const double g = u * (n * b - k) + v * (k - n * a);
    interior += std::exp(log_binomial(n, k) + top) * g * g / (u + v);
  }
  return corner + scale * interior;
}

Sensitivity sigma_x_tensor_sensitivity(int qubits, const ChannelParams& c) {
  const XStateTangent t = ghz_output_tangent(qubits, c);
  // sigma_x^{(x)N} only connects |0...0> and |1...1>; its square is the identity.
  const double mean = 2.0 * t.state.corner().real();
  const double slope = 2.0 * t.d_corner.real();
  const double variance = t.state.trace() - mean * mean;
  if (variance <= tol::kVariance) {
    if (std::abs(slope) <= tol::kProbabilityDerivative) return Sensitivity::of(0.0);
    return Sensitivity::divergent();
  }
  return Sensitivity::of(slope * slope / variance);
}

}  // namespace phasecast
