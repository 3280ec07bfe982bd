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

#include <functional>

#include "phasecast/linalg.hpp"

namespace phasecast {

template <typename T>
struct Derivative {
  T value{};
  double step = 0.0;
  // |D(h) - D(h/2)| at the accepted step, relative to max(1, |value|).
  double discrepancy = 0.0;
  // False when step halving never agreed within tol::kDerivativeUnstable.
  bool stable = true;
};

// Fourth-order central differences with step halving; the accepted estimate
// is the Richardson combination of the last two steps.
Derivative<double> d_dphi(const std::function<double(double)>& fn, double phi);
Derivative<Complex> d_dphi(const std::function<Complex(double)>& fn, double phi);

// As d_dphi, for an angle-valued function: stencil values are unwrapped
// around fn(phi) before differencing.
Derivative<double> d_dphi_phase(const std::function<double(double)>& fn, double phi);

// Single fourth-order stencil at a fixed step, for matrix-valued functions.
ComplexMatrix central_difference(const std::function<ComplexMatrix(double)>& fn, double phi,
                                 double step);

}  // namespace phasecast
