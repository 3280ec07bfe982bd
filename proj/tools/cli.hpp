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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phasecast/channel.hpp"

namespace phasecast::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidationFailed = 2,
  kNumericDomain = 3,
};

enum class Setting { kSequential, kAncilla, kParallel };
enum class Format { kCsv, kJson };

struct ScanConfig {
  Setting setting = Setting::kSequential;
  double phi = 0.1;
  double kappa = 1.0;
  int n_min = 1;
  int n_max = 200;
  std::vector<std::string> observables{"sld-optimal", "sigma-x", "sigma-x-tensor",
                                       "bell-projector"};
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 0;
  Format format = Format::kCsv;

  // Throws InvalidInput.
  void validate() const;
  bool wants(const std::string& observable) const;
};

// One numeric cell: a value, the NA sentinel, or empty (not requested or not
// applicable to the setting).
struct Cell {
  enum class Kind { kValue, kNa, kInf, kEmpty };
  Kind kind = Kind::kEmpty;
  double value = 0.0;

  static Cell of(double v) { return {Kind::kValue, v}; }
  static Cell na() { return {Kind::kNa, 0.0}; }
  static Cell inf() { return {Kind::kInf, 0.0}; }
  static Cell empty() { return {}; }
};

struct ScanRecord {
  Setting setting = Setting::kSequential;
  int n = 1;
  double phi = 0.0;
  double kappa = 0.0;
  Cell qfi;
  Cell f_lower;
  Cell sens_sigma_x;
  Cell sens_bell;
  Cell sens_opt;
  Cell n_opt;
  std::uint64_t seed = 0;
};

inline constexpr const char* kScanHeader =
    "setting,N,phi,kappa,qfi,f_lower,sens_sigma_x,sens_bell,sens_opt,n_opt,seed";

std::string setting_name(Setting s);
Setting parse_setting(const std::string& s);

// 15 significant digits, lowercase exponent.
std::string format_number(double v);
std::string format_cell(const Cell& c);

// Channel parameters for a configuration: exact Kraus path when mc_samples is
// zero, otherwise process tomography of the sampled channel.
ChannelParams channel_for(const ScanConfig& config);

std::vector<ScanRecord> scan(const ScanConfig& config);
void write_scan(const std::vector<ScanRecord>& records, Format format, std::ostream& out);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasecast::cli
