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

#include "phasecast/derivative.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "phasecast/tolerances.hpp"

namespace phasecast {

namespace {

template <typename T>
T stencil(const std::array<T, 4>& f, double h) {
  // f = {f(x-2h), f(x-h), f(x+h), f(x+2h)}
  return (f[0] - 8.0 * f[1] + 8.0 * f[2] - f[3]) / (12.0 * h);
}

template <typename T, typename Sample>
Derivative<T> adaptive(Sample&& sample, double phi) {
  auto at_step = [&](double h) {
    return stencil<T>({sample(phi - 2 * h), sample(phi - h), sample(phi + h), sample(phi + 2 * h)},
                      h);
  };
  Derivative<T> best;
  best.discrepancy = std::numeric_limits<double>::infinity();
  double h = tol::kDerivativeInitialStep;
  T coarse = at_step(h);
  while (h / 2 >= tol::kDerivativeMinStep) {
    const T fine = at_step(h / 2);
    const T extrapolated = (16.0 * fine - coarse) / 15.0;
    const double scale = std::max(1.0, std::abs(extrapolated));
    const double discrepancy = std::abs(fine - coarse) / scale;
    if (discrepancy < best.discrepancy) {
      best.value = extrapolated;
      best.step = h / 2;
      best.discrepancy = discrepancy;
    }
    if (discrepancy <= tol::kDerivativeAgreement) break;
    coarse = fine;
    h /= 2;
  }
  best.stable = best.discrepancy <= tol::kDerivativeUnstable;
  return best;
}

}  // namespace

Derivative<double> d_dphi(const std::function<double(double)>& fn, double phi) {
  return adaptive<double>(fn, phi);
}

Derivative<Complex> d_dphi(const std::function<Complex(double)>& fn, double phi) {
  return adaptive<Complex>(fn, phi);
}

Derivative<double> d_dphi_phase(const std::function<double(double)>& fn, double phi) {
  const double center = fn(phi);
  auto unwrapped = [&](double x) {
    return center + std::remainder(fn(x) - center, 2.0 * std::numbers::pi);
  };
  return adaptive<double>(unwrapped, phi);
}

ComplexMatrix central_difference(const std::function<ComplexMatrix(double)>& fn, double phi,
                                 double step) {
  ComplexMatrix d = fn(phi - 2 * step);
  d -= 8.0 * fn(phi - step);
  d += 8.0 * fn(phi + step);
  d -= fn(phi + 2 * step);
  d *= 1.0 / (12.0 * step);
  return d;
}

}  // namespace phasecast
