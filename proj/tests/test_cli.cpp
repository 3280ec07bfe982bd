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


#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include "json.hpp"
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "phasecast/validation.hpp"

namespace phasecast::cli {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "phasecast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  if (!line.empty() && line.back() == ',') v.push_back("");
  return v;
}

class EnvGuard {
 public:
  explicit EnvGuard(const char* value) {
    if (const char* old = std::getenv("PHASECAST_SEED")) old_ = old;
    if (value) {
      setenv("PHASECAST_SEED", value, 1);
    } else {
      unsetenv("PHASECAST_SEED");
    }
  }
  ~EnvGuard() {
    if (old_.empty()) {
      unsetenv("PHASECAST_SEED");
    } else {
      setenv("PHASECAST_SEED", old_.c_str(), 1);
    }
  }

 private:
  std::string old_;
};

TEST(Cli, ScanHeaderAndRows) {
  EnvGuard env(nullptr);
  const Result r = invoke({"scan", "--n-max", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 6u);
  EXPECT_EQ(l[0], kScanHeader);
  const auto first = split(l[1]);
  ASSERT_EQ(first.size(), 11u);
  EXPECT_EQ(first[0], "sequential");
  EXPECT_EQ(first[1], "1");
  EXPECT_EQ(first[9], "85");
  EXPECT_EQ(first[7], "");  // no Bell observable without an ancilla
}

TEST(Cli, SingleRoundCoincidence) {
  std::vector<double> qfi;
  for (const char* s : {"sequential", "ancilla", "parallel"}) {
    const Result r = invoke({"scan", "--setting", s, "--n-min", "1", "--n-max", "1"});
    ASSERT_EQ(r.code, kOk) << r.err;
    qfi.push_back(std::stod(split(lines(r.out)[1])[4]));
  }
  EXPECT_NEAR(qfi[0], qfi[2], 1e-9);
  EXPECT_GE(qfi[1], qfi[0]);
}

TEST(Cli, CsvAndJsonAgree) {
  const Result csv = invoke({"scan", "--setting", "ancilla", "--n-max", "4"});
  const Result json = invoke({"scan", "--setting", "ancilla", "--n-max", "4", "--format", "json"});
  ASSERT_EQ(csv.code, kOk);
  ASSERT_EQ(json.code, kOk);
  const auto j = nlohmann::json::parse(json.out);
  const auto l = lines(csv.out);
  ASSERT_EQ(j.size(), l.size() - 1);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto f = split(l[i + 1]);
    EXPECT_EQ(j[i]["setting"], f[0]);
    EXPECT_EQ(j[i]["N"].get<int>(), std::stoi(f[1]));
    EXPECT_EQ(j[i]["qfi"].get<double>(), std::stod(f[4]));
    EXPECT_EQ(j[i]["sens_bell"].get<double>(), std::stod(f[7]));
  }
}

TEST(Cli, ObservableSelectionLeavesOthersEmpty) {
  const Result r = invoke({"scan", "--n-max", "2", "--observables", "sigma-x"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto f = split(lines(r.out)[1]);
  EXPECT_NE(f[6], "");
  EXPECT_EQ(f[8], "");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"scan", "--setting", "nonsense"}).code, kUsage);
  EXPECT_EQ(invoke({"scan", "--n-min", "5", "--n-max", "2"}).code, kUsage);
  EXPECT_EQ(invoke({"scan", "--kappa", "-1"}).code, kUsage);
  EXPECT_EQ(invoke({"scan", "--observables", "bogus"}).code, kUsage);
  EXPECT_EQ(invoke({"scan", "--no-such-flag"}).code, kUsage);
  EXPECT_EQ(invoke({"trajectory", "--setting", "parallel"}).code, kUsage);
  EXPECT_EQ(invoke({"scan", "--config", "/nonexistent/phasecast.json"}).code, kUsage);
  EXPECT_EQ(invoke({}).code, kUsage);
}

TEST(Cli, NumericDomainError) {
  const Result r = invoke({"scan", "--setting", "parallel", "--phi", "1e-5", "--n-max", "3"});
  EXPECT_EQ(r.code, kNumericDomain);
  EXPECT_NE(r.err.find("numeric domain"), std::string::npos);
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string path = testing::TempDir() + "phasecast_cfg.json";
  {
    std::ofstream f(path);
    f << R"({"setting": "ancilla", "phi": 0.3, "kappa": 2.0, "n_max": 3, "seed": 5})";
  }
  const Result a = invoke({"scan", "--config", path});
  ASSERT_EQ(a.code, kOk) << a.err;
  auto f = split(lines(a.out)[1]);
  EXPECT_EQ(f[0], "ancilla");
  EXPECT_EQ(f[2], "0.3");
  EXPECT_EQ(f[10], "5");
  EXPECT_EQ(lines(a.out).size(), 4u);

  const Result b = invoke({"scan", "--config", path, "--phi", "0.2", "--seed", "9"});
  ASSERT_EQ(b.code, kOk) << b.err;
  f = split(lines(b.out)[1]);
  EXPECT_EQ(f[2], "0.2");
  EXPECT_EQ(f[3], "2");
  EXPECT_EQ(f[10], "9");

  {
    std::ofstream g(path);
    g << R"({"phi": 0.3, "unknown_key": 1})";
  }
  EXPECT_EQ(invoke({"scan", "--config", path}).code, kUsage);
  std::remove(path.c_str());
}

TEST(Cli, SeedFromEnvironment) {
  {
    EnvGuard env("777");
    EXPECT_EQ(split(lines(invoke({"scan", "--n-max", "1"}).out)[1])[10], "777");
    EXPECT_EQ(split(lines(invoke({"scan", "--n-max", "1", "--seed", "3"}).out)[1])[10], "3");
  }
  {
    EnvGuard env(nullptr);
    EXPECT_EQ(split(lines(invoke({"scan", "--n-max", "1"}).out)[1])[10],
              std::to_string(kDefaultSeed));
  }
  EnvGuard bad("not-a-number");
  EXPECT_EQ(invoke({"scan", "--n-max", "1"}).code, kUsage);
}

TEST(Cli, MonteCarloPathIsReproducible) {
  const std::vector<std::string> args{"scan", "--n-max", "3", "--mc-samples", "200000",
                                      "--seed", "11"};
  const Result a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Result exact = invoke({"scan", "--n-max", "3"});
  const double mc = std::stod(split(lines(a.out)[1])[4]);
  const double ex = std::stod(split(lines(exact.out)[1])[4]);
  EXPECT_NEAR(mc, ex, 0.05 * ex);
}

TEST(Cli, ChannelInfo) {
  const Result r = invoke({"channel-info", "--phi", "0.1", "--kappa", "1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(lines(r.out)[0], "quantity,value");
  EXPECT_NE(r.out.find("n_opt,85"), std::string::npos);
}

TEST(Cli, Trajectory) {
  const Result r = invoke({"trajectory", "--n-max", "10"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 12u);
  EXPECT_EQ(split(l[1])[0], "0");
  EXPECT_EQ(split(l[1])[1], "1");
}

TEST(Cli, NoptContour) {
  const Result r = invoke({"nopt-contour", "--phis", "0.1,0.3", "--kappas", "0.5,1,2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  const auto row = split(l[1]);
  EXPECT_EQ(row[2], "85");
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto cells = split(l[i]);
    for (std::size_t k = 2; k < cells.size(); ++k) {
      EXPECT_LE(std::stod(cells[k - 1]), std::stod(cells[k]));
    }
  }
  // a half turn is the identity channel
  const Result half_turn = invoke({"nopt-contour", "--phis", "3.141592653589793", "--kappas", "1"});
  ASSERT_EQ(half_turn.code, kOk) << half_turn.err;
  EXPECT_EQ(split(lines(half_turn.out)[1])[1], "INF");
  EXPECT_EQ(invoke({"nopt-contour", "--phis", "0", "--kappas", "1"}).code, kUsage);
}

TEST(Cli, ValidateReportsEveryCheck) {
  const Result r = invoke({"validate"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l.size(), registered_checks().size());
  for (const auto& line : l) EXPECT_EQ(line.rfind("PASS ", 0), 0u) << line;
}

TEST(Cli, ValidateInjectedFailure) {
  const Result r = invoke({"validate", "--inject-failure"});
  EXPECT_EQ(r.code, kValidationFailed);
  EXPECT_NE(r.err.find("validation check failed"), std::string::npos);
}

std::string capture(const std::string& command) {
  std::string text;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return text;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe.get())) {
    text.append(buf.data(), n);
  }
  return text;
}

TEST(CliBinary, ByteIdenticalAcrossRuns) {
  const std::string cmd = std::string(PHASECAST_BIN) +
                          " scan --setting parallel --n-max 40 --mc-samples 50000 --seed 4";
  const std::string a = capture(cmd), b = capture(cmd);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(CliBinary, ExitCodes) {
  const std::string bin = std::string(PHASECAST_BIN);
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " scan --n-max 2 > /dev/null").c_str())), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((bin + " scan --setting x 2> /dev/null").c_str())), 1);
  EXPECT_EQ(
      WEXITSTATUS(std::system((bin + " validate --inject-failure > /dev/null 2>&1").c_str())), 2);
}

}  // namespace
}  // namespace phasecast::cli
