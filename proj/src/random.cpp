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

#include "phasecast/random.hpp"

namespace phasecast {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream * kStreamSalt + kGolden))) {}

CounterRng::result_type CounterRng::operator()() {
  const std::uint64_t k = counter_++;
  return mix64(key_ + (k + 1) * kGolden);
}

double CounterRng::uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open_low() { return double(((*this)() >> 11) + 1) * 0x1.0p-53; }

CounterRng CounterRng::split(std::uint64_t index) const {
  return CounterRng(seed_, mix64(stream_ * kGolden + index + 1));
}

}  // namespace phasecast
