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

// Numerical tolerances shared by every module. Changing one of these changes
// the contract of the functions that reference it.

namespace phasecast::tol {

// Hermiticity of density matrices and of generic Hermitian inputs.
inline constexpr double kHermitian = 1e-12;
inline constexpr double kHermitianInput = 1e-10;
// |tr(rho) - 1|.
inline constexpr double kTrace = 1e-12;
// Smallest admissible eigenvalue of a density matrix.
inline constexpr double kNegativeEigenvalue = -1e-10;
// Bloch vectors may exceed unit length by this much.
inline constexpr double kBlochNorm = 1e-12;
inline constexpr double kBlochNormInverse = 1e-9;
// devectorize accepts Hermiticity/trace violations up to this size.
inline constexpr double kDevectorize = 1e-9;

// Jacobi sweeps stop once the off-diagonal Frobenius norm falls below
// kJacobiOffDiagonal times the matrix Frobenius norm.
inline constexpr double kJacobiOffDiagonal = 1e-15;
inline constexpr int kJacobiMaxSweeps = 100;

// Unit-norm check for rotation axes.
inline constexpr double kUnitAxis = 1e-9;
// Completeness of a Kraus set.
inline constexpr double kKrausCompleteness = 1e-10;
// Negative radicand 2A - B clamped to zero when above this value.
inline constexpr double kRadicandClamp = -1e-12;
// Complete-positivity constraints on (lambda_par, lambda_perp).
inline constexpr double kCompletePositivity = 1e-12;
// Relative size below which the denominator of the coherence factor is
// treated as vanishing.
inline constexpr double kCoherenceDenominator = 1e-14;
// Phase covariance checks in process tomography.
inline constexpr double kCovariance = 1e-6;

// Eigenvalue pairs with q_i + q_j at or below this value are dropped from
// the Fisher information sums.
inline constexpr double kEigenSum = 1e-12;
// A dropped pair whose derivative matrix element exceeds this is reported.
inline constexpr double kDroppedElement = 1e-8;
// Observable variance below which the sensitivity is indeterminate.
inline constexpr double kVariance = 1e-14;
// Outcome probabilities and their derivatives in classical Fisher sums.
inline constexpr double kProbability = 1e-14;
inline constexpr double kProbabilityDerivative = 1e-12;
// Tolerance for projector sets resolving the identity.
inline constexpr double kResolution = 1e-10;
// Denominators of closed-form sensitivities.
inline constexpr double kDenominator = 1e-14;

// Finite differences in phi.
inline constexpr double kDerivativeInitialStep = 1e-2;
inline constexpr double kDerivativeMinStep = 1e-6;
inline constexpr double kDerivativeAgreement = 1e-7;
inline constexpr double kDerivativeUnstable = 1e-5;
// Fixed step for differentiating full state evolutions.
inline constexpr double kStateDerivativeStep = 1e-4;

// Phases within this distance of a multiple of pi are rejected by the
// parallel closed form.
inline constexpr double kParallelMinPhase = 1e-3;
// Probability vector sums and X-state trace.
inline constexpr double kProbabilitySum = 1e-10;

}  // namespace phasecast::tol
