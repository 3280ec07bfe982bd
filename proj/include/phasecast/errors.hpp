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

#include <stdexcept>
#include <string>

namespace phasecast {

// A parameter point where a formula has no finite value (e.g. a vanishing
// denominator, lambda_perp >= 1 where a decay rate is required).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input that violates a structural precondition (dimension, Hermiticity,
// positivity, normalization).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace phasecast
