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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace phasecast {

inline constexpr std::uint64_t kDefaultSeed = 20261018;

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t mc_samples = 1'000'000;
  // Multiplies every tolerance; 0 forces any nonzero deviation to fail.
  double tolerance_scale = 1.0;
};

// |a - b| / max(1, |b|).
double relative_deviation(double a, double b);

// Runs `body`, which returns the measured deviation, and compares it with
// tolerance * scale. Exceptions are reported as failures.
CheckResult run_check(const std::string& name, double tolerance, double scale,
                      const std::function<double(std::string&)>& body);

struct RegisteredCheck {
  std::string name;
  double tolerance;
  std::function<double(const ValidationOptions&, std::string&)> body;
};

// Oracle cross-checks and invariants for every module.
const std::vector<RegisteredCheck>& registered_checks();
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace phasecast
