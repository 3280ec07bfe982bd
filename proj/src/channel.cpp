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

#include "phasecast/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "phasecast/derivative.hpp"
#include "phasecast/errors.hpp"
#include "phasecast/tolerances.hpp"

namespace phasecast {

namespace {

constexpr double kPi = std::numbers::pi;

// Argument in (-pi, pi].
double principal_arg(Complex z) {
  const double a = std::arg(z);
  return a <= -kPi ? a + 2 * kPi : a;
}

// kappa coth(kappa) - 1, with its Taylor series near zero.
double kappa_coth_minus_one(double kappa) {
  if (kappa < 1e-2) {
    const double k2 = kappa * kappa;
    return k2 * (1.0 / 3 + k2 * (-1.0 / 45 + k2 * (2.0 / 945 - k2 / 4725)));
  }
  return kappa / std::tanh(kappa) - 1.0;
}

// 1 - kappa^2 / sinh^2(kappa).
double one_minus_kappa_over_sinh_sq(double kappa) {
  if (kappa < 1e-2) {
    const double k2 = kappa * kappa;
    return k2 * (1.0 / 3 + k2 * (-1.0 / 15 + k2 * (2.0 / 189 - k2 / 675)));
  }
  const double r = kappa / std::sinh(kappa);
  return 1.0 - r * r;
}

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    std::ostringstream msg;
    msg << "vMF channel requires kappa > 0 (got " << kappa << ")";
    throw InvalidInput(msg.str());
  }
}

// The functions A, B and C entering the Kraus operators. The hyperbolic
// factors are divided through by sinh(kappa) so that large kappa does not
// overflow; the ratios are unchanged.
struct KrausCoefficients {
  double A = 0.0;
  double B = 0.0;
  Complex C;
  double w = 0.0;  // kappa coth kappa - 1
  bool clamped = false;
  double plus = 0.0;   // sqrt(2A + B)
  double minus = 0.0;  // sqrt(2A - B)
};

KrausCoefficients kraus_coefficients(const VmfParams& p) {
  require_kappa(p.kappa);
  const double k = p.kappa;
  const double s1 = std::sin(p.phi);
  const double sin_sq = s1 * s1;
  const double s2 = std::sin(2 * p.phi);
  const double c2 = std::cos(2 * p.phi);

  KrausCoefficients out;
  out.w = kappa_coth_minus_one(k);
  // 1 + kappa^2 - cos 2phi - 2 kappa sin^2 phi coth kappa
  out.A = k * k - 2.0 * sin_sq * out.w;
  // sqrt(2 kappa^2 (cosh 2kappa - 2kappa^2 - 1) csch^2 kappa sin^2 2phi)
  out.B = 2.0 * k * std::abs(s2) * std::sqrt(one_minus_kappa_over_sinh_sq(k));

  double low = 2.0 * out.A - out.B;
  const double high = 2.0 * out.A + out.B;
  if (low < 0.0) {
    if (low < tol::kRadicandClamp * std::max(1.0, high)) {
      std::ostringstream msg;
      msg << "vMF Kraus: 2A - B = " << low << " is negative beyond rounding";
      throw DomainError(msg.str());
    }
    low = 0.0;
    out.clamped = true;
  }
  out.plus = std::sqrt(high);
  out.minus = std::sqrt(low);

  // Denominator of C after division by sinh(kappa):
  // kappa [kappa sinh(kappa + 2i phi) - cosh(kappa + 2i phi) + cosh kappa] / sinh kappa
  //   - 2 sin^2 phi
  const Complex denominator(k * k * c2 + 2.0 * sin_sq * out.w, k * s2 * out.w);
  const double scale = k * k + 2.0 * sin_sq * out.w;
  if (std::abs(denominator) <= tol::kCoherenceDenominator * scale) {
    std::ostringstream msg;
    msg << "vMF Kraus: coherence denominator vanishes at kappa = " << k << ", phi = " << p.phi;
    throw DomainError(msg.str());
  }
  // Numerator radicand over sinh^2 kappa equals (4A^2 - B^2)/2.
  out.C = std::sqrt(0.5 * low * high) / denominator;
  return out;
}

}  // namespace

ChannelParams ChannelParams::from_components(double phi, double lambda_par, double lambda_perp,
                                             double g, double d_lambda_par, double d_lambda_perp,
                                             double d_g) {
  ChannelParams c;
  c.phi = phi;
  c.lambda_par = lambda_par;
  c.lambda_perp = lambda_perp;
  c.g = g;
  c.d_lambda_par = d_lambda_par;
  c.d_lambda_perp = d_lambda_perp;
  c.d_g = d_g;
  const Complex rotation = std::polar(1.0, -g);
  c.S = lambda_perp * rotation;
  c.dS = Complex(d_lambda_perp, -lambda_perp * d_g) * rotation;
  c.mu = principal_arg(c.S);
  c.nu = principal_arg(c.dS);
  return c;
}

ChannelParams ChannelParams::from_coherence(double phi, double lambda_par, Complex S,
                                            double d_lambda_par, Complex dS) {
  ChannelParams c;
  c.phi = phi;
  c.lambda_par = lambda_par;
  c.d_lambda_par = d_lambda_par;
  c.S = S;
  c.dS = dS;
  c.lambda_perp = std::abs(S);
  c.mu = principal_arg(S);
  c.nu = principal_arg(dS);
  c.g = -c.mu;
  if (c.lambda_perp > 0.0) {
    c.d_lambda_perp = (std::conj(S) * dS).real() / c.lambda_perp;
    c.d_g = -(dS / S).imag();
  }
  return c;
}

bool ChannelParams::completely_positive() const {
  return lambda_par <= 1.0 + tol::kCompletePositivity &&
         2.0 * lambda_perp <= 1.0 + lambda_par + tol::kCompletePositivity;
}

double KrausSet::completeness_defect() const {
  ComplexMatrix sum(2);
  for (const auto& k : operators) sum += k.adjoint() * k;
  return max_abs_diff(sum, ComplexMatrix::identity(2));
}

ComplexMatrix KrausSet::apply(const ComplexMatrix& op) const {
  if (op.dim() != 2) throw InvalidInput("KrausSet::apply: 2x2 operator required");
  ComplexMatrix out(2);
  for (const auto& k : operators) out += k * op * k.adjoint();
  return out;
}

DensityMatrix KrausSet::apply(const DensityMatrix& rho) const {
  return DensityMatrix::trusted(apply(rho.matrix()));
}

VectorizedState LiouvilleMatrix::apply(const VectorizedState& v) const {
  const auto out = k.apply(v.v);
  return VectorizedState{{out[0], out[1], out[2], out[3]}};
}

double vmf_density(double theta, double kappa) {
  if (kappa < 0.0) throw InvalidInput("vmf_density: kappa must be non-negative");
  if (kappa == 0.0) return 1.0 / (4 * kPi);
  // kappa e^{kappa (cos theta - 1)} / (2 pi (1 - e^{-2 kappa}))
  return kappa * std::exp(kappa * (std::cos(theta) - 1.0)) / (-2 * kPi * std::expm1(-2 * kappa));
}

std::array<double, 3> sample_vmf(double kappa, CounterRng& rng) {
  if (kappa < 0.0) throw InvalidInput("sample_vmf: kappa must be non-negative");
  const double u = rng.uniform_open_low();
  double cos_theta = 2.0 * u - 1.0;
  if (kappa > 0.0) {
    // 1 + ln(u + (1 - u) e^{-2 kappa}) / kappa
    cos_theta = 1.0 + std::log1p((1.0 - u) * std::expm1(-2.0 * kappa)) / kappa;
  }
  cos_theta = std::clamp(cos_theta, -1.0, 1.0);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  const double azimuth = 2 * kPi * rng.uniform();
  return {sin_theta * std::cos(azimuth), sin_theta * std::sin(azimuth), cos_theta};
}

ComplexMatrix generator_unitary(const std::array<double, 3>& n, double phi) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(norm - 1.0) > tol::kUnitAxis) {
    std::ostringstream msg;
    msg << "generator_unitary: axis norm " << norm << " is not 1";
    throw InvalidInput(msg.str());
  }
  const double c = std::cos(phi);
  const Complex mi(0.0, -std::sin(phi));
  // c I - i s (n_x X + n_y Y + n_z Z)
  return ComplexMatrix{c + mi * n[2], mi * Complex(n[0], -n[1]), mi * Complex(n[0], n[1]),
                       c - mi * n[2]};
}

MonteCarloChannel::MonteCarloChannel(double kappa, std::uint64_t samples, CounterRng rng,
                                     unsigned shards)
    : kappa_(kappa), samples_(samples), rng_(rng), shards_(shards) {
  if (samples == 0) throw InvalidInput("MonteCarloChannel: samples must be positive");
  if (kappa < 0.0) throw InvalidInput("MonteCarloChannel: kappa must be non-negative");
  if (shards == 0) throw InvalidInput("MonteCarloChannel: shards must be positive");
}

template <typename Accumulate>
ComplexMatrix MonteCarloChannel::run(std::size_t dim, double phi, Accumulate&& accumulate) const {
  std::vector<ComplexMatrix> partial(shards_, ComplexMatrix(dim));
  const double c = std::cos(phi);
  const Complex mi(0.0, -std::sin(phi));

  auto work = [&](unsigned shard) {
    CounterRng rng = rng_.split(shard);
    const std::uint64_t count = samples_ / shards_ + (shard < samples_ % shards_ ? 1 : 0);
    ComplexMatrix& acc = partial[shard];
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto n = sample_vmf(kappa_, rng);
      const std::array<Complex, 4> u{c + mi * n[2], mi * Complex(n[0], -n[1]),
                                     mi * Complex(n[0], n[1]), c - mi * n[2]};
      accumulate(u, acc);
    }
  };

  // Shards own their substreams and partial sums, so the result does not
  // depend on how many threads run them.
  const unsigned threads = std::max(1u, std::min(shards_, std::thread::hardware_concurrency()));
  if (threads == 1) {
    for (unsigned shard = 0; shard < shards_; ++shard) work(shard);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (unsigned shard = t; shard < shards_; shard += threads) work(shard);
      });
    }
  }

  ComplexMatrix total(dim);
  for (const auto& p : partial) total += p;
  total *= 1.0 / double(samples_);
  return total;
}

ComplexMatrix MonteCarloChannel::apply(const ComplexMatrix& op, double phi) const {
  if (op.dim() != 2) throw InvalidInput("MonteCarloChannel::apply: 2x2 operator required");
  const Complex a = op(0, 0), b = op(0, 1), cc = op(1, 0), d = op(1, 1);
  return run(2, phi, [&](const std::array<Complex, 4>& u, ComplexMatrix& acc) {
    // t = U op
    const Complex t00 = u[0] * a + u[1] * cc, t01 = u[0] * b + u[1] * d;
    const Complex t10 = u[2] * a + u[3] * cc, t11 = u[2] * b + u[3] * d;
    // t U^dagger
    acc(0, 0) += t00 * std::conj(u[0]) + t01 * std::conj(u[1]);
    acc(0, 1) += t00 * std::conj(u[2]) + t01 * std::conj(u[3]);
    acc(1, 0) += t10 * std::conj(u[0]) + t11 * std::conj(u[1]);
    acc(1, 1) += t10 * std::conj(u[2]) + t11 * std::conj(u[3]);
  });
}

ComplexMatrix MonteCarloChannel::choi(double phi) const {
  // (U (x) 1)|Psi+> has components U_ab / sqrt(2) in the |ab> basis.
  return run(4, phi, [](const std::array<Complex, 4>& u, ComplexMatrix& acc) {
    for (std::size_t i = 0; i < 4; ++i) {
      const Complex ui = 0.5 * u[i];
      for (std::size_t j = 0; j < 4; ++j) acc(i, j) += ui * std::conj(u[j]);
    }
  });
}

QubitMap MonteCarloChannel::at(double phi) const {
  return [self = *this, phi](const ComplexMatrix& op) { return self.apply(op, phi); };
}

DensityMatrix apply_channel_mc(const DensityMatrix& rho, const VmfParams& p, std::uint64_t samples,
                               const CounterRng& rng) {
  if (rho.dim() != 2) throw InvalidInput("apply_channel_mc: single-qubit state required");
  const MonteCarloChannel channel(p.kappa, samples, rng);
  return DensityMatrix::trusted(channel.apply(rho.matrix(), p.phi));
}

double vmf_lambda_par(const VmfParams& p) {
  require_kappa(p.kappa);
  const double s = std::sin(p.phi);
  // 1 - 2 K_{2,01}^2
  return 1.0 - 4.0 * s * s * kappa_coth_minus_one(p.kappa) / (p.kappa * p.kappa);
}

double vmf_alpha(const VmfParams& p) {
  require_kappa(p.kappa);
  const double s = std::sin(p.phi);
  return 2.0 * kappa_coth_minus_one(p.kappa) * s * s / (p.kappa * p.kappa);
}

Complex vmf_coherence_factor(const VmfParams& p) {
  const auto coef = kraus_coefficients(p);
  const double k = p.kappa;
  // sqrt(4A^2 - B^2) / (2 sqrt(2) kappa^2) * C
  return std::sqrt(std::max(0.0, 4.0 * coef.A * coef.A - coef.B * coef.B)) /
         (2.0 * std::numbers::sqrt2 * k * k) * coef.C;
}

KrausSet kraus_vmf(const VmfParams& p) {
  const auto coef = kraus_coefficients(p);
  const double k = p.kappa;
  const double flip = std::numbers::sqrt2 * std::sin(p.phi) * std::sqrt(coef.w) / k;
  const double k3_11 = (coef.plus + coef.minus) / (2.0 * std::numbers::sqrt2 * k);
  const double k4_11 = (coef.plus - coef.minus) / (2.0 * std::numbers::sqrt2 * k);
  const Complex k3_00 = coef.C / std::numbers::sqrt2 * k3_11;
  const Complex k4_00 = -coef.C / std::numbers::sqrt2 * k4_11;

  KrausSet set;
  set.clamped = coef.clamped;
  set.operators = {
      ComplexMatrix{0.0, 0.0, flip, 0.0},     // K_{1,10}
      ComplexMatrix{0.0, flip, 0.0, 0.0},     // K_{2,01}
      ComplexMatrix{k3_00, 0.0, 0.0, k3_11},  // K_3
      ComplexMatrix{k4_00, 0.0, 0.0, k4_11},  // K_4
  };
  const double defect = set.completeness_defect();
  if (defect > tol::kKrausCompleteness) {
    std::ostringstream msg;
    msg << "kraus_vmf: completeness defect " << defect << " at kappa = " << k
        << ", phi = " << p.phi;
    throw DomainError(msg.str());
  }
  return set;
}

ChannelParams channel_params_vmf(const VmfParams& p) {
  require_kappa(p.kappa);
  const double kappa = p.kappa;
  const Complex S = vmf_coherence_factor(p);
  const double lambda_par = vmf_lambda_par(p);
  const auto dS = d_dphi(
      std::function<Complex(double)>([kappa](double x) { return vmf_coherence_factor({kappa, x}); }),
      p.phi);
  const auto dpar = d_dphi(
      std::function<double(double)>([kappa](double x) { return vmf_lambda_par({kappa, x}); }),
      p.phi);
  auto c = ChannelParams::from_coherence(p.phi, lambda_par, S, dpar.value, dS.value);
  if (!c.completely_positive()) {
    std::ostringstream msg;
    msg << "channel_params_vmf: complete positivity violated (lambda_par = " << c.lambda_par
        << ", lambda_perp = " << c.lambda_perp << ")";
    throw DomainError(msg.str());
  }
  return c;
}

LiouvilleMatrix liouville_from_params(const ChannelParams& c) {
  if (!c.completely_positive()) {
    std::ostringstream msg;
    msg << "liouville_from_params: not completely positive (lambda_par = " << c.lambda_par
        << ", lambda_perp = " << c.lambda_perp << ")";
    throw DomainError(msg.str());
  }
  const double keep = 0.5 * (1.0 + c.lambda_par);
  const double flip = 0.5 * (1.0 - c.lambda_par);
  return LiouvilleMatrix{ComplexMatrix{keep, 0.0, 0.0, flip,           //
                                       0.0, c.S, 0.0, 0.0,             //
                                       0.0, 0.0, std::conj(c.S), 0.0,  //
                                       flip, 0.0, 0.0, keep}};
}

ComplexMatrix liouville_derivative(const ChannelParams& c) {
  const double h = 0.5 * c.d_lambda_par;
  return ComplexMatrix{h, 0.0, 0.0, -h,                 //
                       0.0, c.dS, 0.0, 0.0,             //
                       0.0, 0.0, std::conj(c.dS), 0.0,  //
                       -h, 0.0, 0.0, h};
}

ComplexMatrix liouville_from_kraus(const KrausSet& kraus) {
  ComplexMatrix k(4);
  for (const auto& op : kraus.operators) k += kron(op, op.conjugate());
  return k;
}

Bloch3x3 bloch_map(const ChannelParams& c) {
  const double cg = c.lambda_perp * std::cos(c.g);
  const double sg = c.lambda_perp * std::sin(c.g);
  return {{{cg, -sg, 0.0}, {sg, cg, 0.0}, {0.0, 0.0, c.lambda_par}}};
}

ComplexMatrix choi_matrix(const QubitMap& map) {
  ComplexMatrix choi(4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix unit(2);
      unit(i, j) = 1.0;
      const ComplexMatrix image = map(unit);
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) choi(2 * a + i, 2 * b + j) += 0.5 * image(a, b);
      }
    }
  }
  return choi;
}

QubitMap as_map(const KrausSet& kraus) {
  return [kraus](const ComplexMatrix& op) { return kraus.apply(op); };
}

QubitMap as_map(const LiouvilleMatrix& liouville) {
  return [liouville](const ComplexMatrix& op) {
    if (op.dim() != 2) throw InvalidInput("Liouville map: 2x2 operator required");
    return unvec(liouville.k.apply(vec(op)));
  };
}

namespace {

struct TomographyReading {
  double lambda_par;
  Complex S;
};

TomographyReading read_channel(const QubitMap& map, double covariance_tol) {
  auto fail = [](const std::string& what, double deviation) {
    std::ostringstream msg;
    msg << "process_tomography: " << what << " (deviation " << deviation << ")";
    throw DomainError(msg.str());
  };
  const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
  const double unital = max_abs_diff(map(half), half);
  if (unital > covariance_tol) fail("channel is not unital", unital);

  const ComplexMatrix zero_image = map(zero_state().matrix());
  if (std::abs(zero_image(0, 1)) > covariance_tol) {
    fail("image of |0><0| acquired coherence", std::abs(zero_image(0, 1)));
  }
  const double lambda_par = (zero_image(0, 0) - zero_image(1, 1)).real();

  const ComplexMatrix plus_image = map(plus_state().matrix());
  const double z_leak = std::abs(plus_image(0, 0) - plus_image(1, 1));
  if (z_leak > covariance_tol) fail("image of |+><+| acquired a z component", z_leak);
  const Complex S = 2.0 * plus_image(0, 1);

  // rho_01 -> S rho_01 for every equatorial input.
  for (double xi : {0.5 * kPi, kPi / 3, 1.0, 2.5}) {
    const Complex e = std::polar(0.5, -xi);
    const ComplexMatrix input{0.5, e, std::conj(e), 0.5};
    const ComplexMatrix image = map(input);
    const double deviation =
        std::max(std::abs(image(0, 1) - S * e), std::abs(image(0, 0) - 0.5));
    if (deviation > covariance_tol) fail("channel is not phase covariant", deviation);
  }
  return {lambda_par, S};
}

}  // namespace

ChannelParams process_tomography(const QubitMap& map, double covariance_tol) {
  const auto reading = read_channel(map, covariance_tol);
  auto c = ChannelParams::from_coherence(0.0, reading.lambda_par, reading.S, 0.0, 0.0);
  c.has_derivatives = false;
  c.d_lambda_perp = c.d_g = 0.0;
  c.nu = 0.0;
  return c;
}

ChannelParams process_tomography(const std::function<QubitMap(double)>& family, double phi,
                                 double covariance_tol) {
  const auto reading = read_channel(family(phi), covariance_tol);
  const auto dS = d_dphi(std::function<Complex(double)>([&](double x) {
                           return 2.0 * family(x)(plus_state().matrix())(0, 1);
                         }),
                         phi);
  const auto dpar = d_dphi(std::function<double(double)>([&](double x) {
                             const ComplexMatrix img = family(x)(zero_state().matrix());
                             return (img(0, 0) - img(1, 1)).real();
                           }),
                           phi);
  return ChannelParams::from_coherence(phi, reading.lambda_par, reading.S, dpar.value, dS.value);
}

std::vector<double> unwrap_phases(std::vector<double> angles) {
  for (std::size_t i = 1; i < angles.size(); ++i) {
    angles[i] = angles[i - 1] + std::remainder(angles[i] - angles[i - 1], 2 * kPi);
  }
  return angles;
}

}  // namespace phasecast
