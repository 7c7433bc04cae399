//
// Copyright 2026 The Lipschitz DP Authors
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
//

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "lipdp/commands.h"
#include "lipdp/config.h"
#include "lipdp/csv.h"
#include "lipdp/format.h"
#include "lipdp/manifest.h"

namespace lipdp {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("lipdp_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()
                                                     ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void Write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string Read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig Config(const std::string& command,
                        const std::map<std::string, std::string>& cli,
                        const std::optional<std::string>& file = std::nullopt) {
  absl::StatusOr<ExperimentConfig> c = ResolveConfig(command, cli, file);
  EXPECT_TRUE(c.ok()) << c.status();
  return c.ok() ? *c : ExperimentConfig{};
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult Execute(const ExperimentConfig& config) {
  std::ostringstream out, err;
  const int code = RunCommand(config, out, err);
  return {code, out.str(), err.str()};
}

// --- CSV -------------------------------------------------------------------

TEST(Csv, ParsesQuotesAndCrlf) {
  const CsvTable t = *ParseCsv("a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n\r\n2,z,\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "x, y");
  EXPECT_EQ(t.rows[0][2], "say \"hi\"");
  EXPECT_EQ(t.rows[1][2], "");
  const CsvTable again = *ParseCsv(WriteCsv(t));
  EXPECT_EQ(again.header, t.header);
  EXPECT_EQ(again.rows, t.rows);
}

TEST(Csv, ReportsLocationOfErrors) {
  absl::StatusOr<CsvTable> bad = ParseCsv("a,b\n1,2\n3\n");
  ASSERT_FALSE(bad.ok());
  EXPECT_NE(bad.status().message().find("line 3"), std::string::npos) << bad.status();
  EXPECT_FALSE(ParseCsv("a,b\n\"open,2\n").ok());
  absl::StatusOr<NumericView> v = ExtractNumeric(*ParseCsv("x,y\n1,2\n3,oops\n"));
  ASSERT_FALSE(v.ok());
  EXPECT_NE(v.status().message().find("row 2, column 2"), std::string::npos) << v.status();
  EXPECT_FALSE(ExtractNumeric(*ParseCsv("x,y\n1,inf\n")).ok());
}

TEST(Csv, WideAndLongLayouts) {
  const NumericView wide = *ExtractNumeric(*ParseCsv("id,name,a,b,c\n7,p,1,2,3\n8,q,4,5,6\n"));
  EXPECT_EQ(wide.layout, CsvLayout::kWide);
  EXPECT_EQ(wide.users, 2);
  EXPECT_EQ(wide.dims, 3);
  EXPECT_EQ(wide.values, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  const NumericView lng =
      *ExtractNumeric(*ParseCsv("user_id,dim,value\nu1,0,1\nu1,1,2\nu2,0,3\nu2,1,4\n"));
  EXPECT_EQ(lng.layout, CsvLayout::kLong);
  EXPECT_EQ(lng.users, 2);
  EXPECT_EQ(lng.dims, 2);
  EXPECT_EQ(lng.values, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_FALSE(ExtractNumeric(*ParseCsv("user_id,dim,value\nu1,0,1\nu1,0,2\n")).ok());
  EXPECT_FALSE(ExtractNumeric(*ParseCsv("user_id,dim,value\nu1,0,1\nu1,1,2\nu2,0,3\n")).ok());
}

TEST(Csv, ReplaceKeepsMetadata) {
  CsvTable t = *ParseCsv("id,name,a\n1,\"x,y\",0.5\n");
  const NumericView v = *ExtractNumeric(t);
  ReplaceNumeric(v, {0.1}, t);
  EXPECT_EQ(WriteCsv(t), "id,name,a\n1,\"x,y\",0.10000000000000001\n");
  EXPECT_EQ(std::stod(FormatDouble(0.1)), 0.1);
  EXPECT_EQ(FormatDouble(1.0), "1");
}

// --- Config ----------------------------------------------------------------

TEST(Config, PrecedenceDefaultsFileCli) {
  TempDir dir;
  const std::string path = dir.File("c.json");
  Write(path, R"({"epsilon": 2.5, "trials": 5000, "adjacency": "l2"})");
  const ExperimentConfig a = Config("mse", {}, path);
  EXPECT_EQ(a.epsilon, 2.5);
  EXPECT_EQ(a.trials, 5000);
  EXPECT_EQ(a.alpha, 1.0);
  const ExperimentConfig b = Config("mse", {{"epsilon", "0.5"}}, path);
  EXPECT_EQ(b.epsilon, 0.5);
  EXPECT_EQ(b.adjacency, "l2");
  EXPECT_EQ(Config("mse", {}).format, "json");
  EXPECT_EQ(Config("dual", {{"bisect", "true"}}).format, "csv");
}

TEST(Config, ParsesTypes) {
  const ExperimentConfig c = Config(
      "dual", {{"lambda", "1.6,1.9,2"}, {"bisect", "true"}, {"seed", "18446744073709551615"},
               {"M", "4"}, {"nu", "0.2"}, {"vmax", "30"}});
  EXPECT_EQ(c.lambda, (std::vector<double>{1.6, 1.9, 2.0}));
  EXPECT_TRUE(c.bisect);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.big_m, 4.0);
  EXPECT_EQ(*c.vmax, 30.0);
}

TEST(Config, RejectsBadInput) {
  TempDir dir;
  const std::string path = dir.File("bad.json");
  Write(path, R"({"epsilon": 1, "epsilonn": 2})");
  absl::StatusOr<ExperimentConfig> unknown = ResolveConfig("mse", {}, path);
  ASSERT_FALSE(unknown.ok());
  EXPECT_EQ(unknown.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(unknown.status().message().find("epsilonn"), std::string::npos);
  EXPECT_NE(unknown.status().message().find("valid keys"), std::string::npos);
  EXPECT_EQ(ResolveConfig("mse", {}, dir.File("missing.json")).status().code(),
            absl::StatusCode::kNotFound);
  Write(path, R"({"epsilon": "one"})");
  EXPECT_FALSE(ResolveConfig("mse", {}, path).ok());
  for (const auto& [key, value] : std::map<std::string, std::string>{
           {"epsilon", "0"}, {"epsilon", "-1"}, {"epsilon", "abc"}, {"trials", "0"},
           {"adjacency", "l3"}, {"format", "xml"}, {"n", "0"}, {"bisect", "maybe"},
           {"alpha", "-0.5"}, {"schedule", "4:0"}, {"nu", "0"}}) {
    EXPECT_EQ(ResolveConfig("mse", {{key, value}}, std::nullopt).status().code(),
              absl::StatusCode::kInvalidArgument)
        << key << "=" << value;
  }
  EXPECT_FALSE(ResolveConfig("frobnicate", {}, std::nullopt).ok());
  absl::StatusOr<ExperimentConfig> density =
      ResolveConfig("audit", {{"density", "cauchy"}}, std::nullopt);
  ASSERT_FALSE(density.ok());
  EXPECT_NE(density.status().message().find("staircase"), std::string::npos);
}

TEST(Config, CanonicalHashIsOrderIndependent) {
  TempDir dir;
  const std::string path = dir.File("c.json");
  Write(path, R"({"epsilon": 2, "n": 3})");
  const ExperimentConfig a = Config("mse", {}, path);
  const ExperimentConfig b = Config("mse", {{"n", "3"}, {"epsilon", "2.0"}});
  EXPECT_EQ(CanonicalConfigJson(a), CanonicalConfigJson(b));
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(ConfigHash(a).size(), 16u);
  EXPECT_NE(ConfigHash(a), ConfigHash(Config("mse", {{"n", "3"}, {"epsilon", "2.5"}})));
}

TEST(Config, Schedule) {
  EXPECT_EQ(*ParseSchedule("4:0.2,6:0.1"),
            (std::vector<std::pair<double, double>>{{4, 0.2}, {6, 0.1}}));
  EXPECT_EQ(ParseSchedule("default")->size(), 4u);
  EXPECT_FALSE(ParseSchedule("4-0.2").ok());
}

// --- Manifest --------------------------------------------------------------

TEST(Manifest, RoundTrip) {
  Manifest m;
  m.version = "0.1.0";
  m.rng_version = "v";
  m.command = "mse";
  m.seed = 18446744073709551615ULL;
  m.config_hash = "0123456789abcdef";
  m.config = CanonicalConfigJson(Config("mse", {}));
  m.wall_time_seconds = 0.125;
  m.values = {{"theoretical_mse", 24.0}};
  const std::string json = ManifestToJson(m);
  const Manifest back = *ManifestFromJson(json);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(ManifestToJson(back), json);
  EXPECT_FALSE(ManifestFromJson("[]").ok());
  EXPECT_FALSE(ManifestFromJson(R"({"version": 1})").ok());
}

// --- Commands --------------------------------------------------------------

TEST(Exit, CodesByStatus) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), 0);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("")), 2);
  EXPECT_EQ(ExitCodeFor(absl::NotFoundError("")), 4);
  EXPECT_EQ(ExitCodeFor(absl::PermissionDeniedError("")), 4);
  EXPECT_EQ(ExitCodeFor(absl::FailedPreconditionError("")), 3);
}

TEST(Privatize, CompositeIsDeterministicAndPreservesShape) {
  TempDir dir;
  const std::string input = dir.File("in.csv");
  Write(input, "user,label,a,b,c\n1,\"x,1\",1,2,3\n2,y,4,5,6\n");
  const ExperimentConfig c = Config(
      "privatize", {{"input", input}, {"seed", "5"}, {"output", dir.File("out.csv")}});
  ASSERT_EQ(Execute(c).code, 0);
  const std::string first = Read(dir.File("out.csv"));
  ASSERT_EQ(Execute(c).code, 0);
  EXPECT_EQ(Read(dir.File("out.csv")), first);
  const CsvTable in = *ParseCsv(Read(input));
  const CsvTable out = *ParseCsv(first);
  ASSERT_EQ(out.rows.size(), in.rows.size());
  EXPECT_EQ(out.header, in.header);
  for (size_t r = 0; r < in.rows.size(); ++r) {
    ASSERT_EQ(out.rows[r].size(), in.rows[r].size());
    EXPECT_EQ(out.rows[r][0], in.rows[r][0]);
    EXPECT_EQ(out.rows[r][1], in.rows[r][1]);
    EXPECT_NE(out.rows[r][2], in.rows[r][2]);
  }
  const Manifest m = *ManifestFromJson(Read(dir.File("out.csv.manifest.json")));
  EXPECT_EQ(m.command, "privatize");
  EXPECT_EQ(m.seed, 5u);
  EXPECT_EQ(m.values.at("theoretical_mse"), 24.0);
  EXPECT_EQ(m.config_hash, ConfigHash(c));
}

TEST(Privatize, AveragePerturbationMatchesTheory) {
  TempDir dir;
  const std::string input = dir.File("in.csv");
  Write(input, "a,b,c\n0,0,0\n0,0,0\n");
  double total = 0.0;
  const int runs = 4000;
  for (int seed = 0; seed < runs; ++seed) {
    const RunResult r = Execute(Config("privatize", {{"input", input}, {"seed", std::to_string(seed)}}));
    ASSERT_EQ(r.code, 0);
    const NumericView v = *ExtractNumeric(*ParseCsv(r.out));
    for (double x : v.values) total += x * x;
  }
  // Var of ||V||^2 for Gamma(3, 1) radii is 2 * (E r^4 - 144) = 2 * 216;
  // the 4000-run mean has standard error about 0.33.
  EXPECT_NEAR(total / runs, 24.0, 1.2);
}

TEST(Privatize, LargeEpsilonAndScalarLaplace) {
  TempDir dir;
  const std::string input = dir.File("in.csv");
  Write(input, "a,b\n1.5,-2\n3,4\n");
  const RunResult r = Execute(Config("privatize", {{"input", input}, {"epsilon", "1e6"}}));
  ASSERT_EQ(r.code, 0);
  const NumericView v = *ExtractNumeric(*ParseCsv(r.out));
  const std::vector<double> want{1.5, -2, 3, 4};
  for (size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(v.values[i], want[i], 1e-4);

  Write(input, "x\n10\n");
  const RunResult s = Execute(Config("privatize", {{"input", input}, {"adjacency", "l1"}, {"seed", "3"}}));
  ASSERT_EQ(s.code, 0);
  EXPECT_NE(s.out, "x\n10\n");
}

TEST(Privatize, Errors) {
  TempDir dir;
  const std::string input = dir.File("in.csv");
  Write(input, "a,b\n1,2\n3,x\n");
  const RunResult bad = Execute(Config("privatize", {{"input", input}}));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("row 2, column 2"), std::string::npos) << bad.err;
  Write(input, "a,b\n1,2\n");
  EXPECT_EQ(Execute(Config("privatize", {{"input", input}, {"m", "3"}})).code, 2);
  EXPECT_EQ(Execute(Config("privatize", {{"input", dir.File("nope.csv")}})).code, 4);
  EXPECT_EQ(Execute(Config("privatize", {})).code, 2);
  EXPECT_EQ(Execute(Config("privatize", {{"input", input}, {"output", dir.File("no/such/dir.csv")}})).code, 4);
}

TEST(Mse, ReportAndDeterminism) {
  const ExperimentConfig c =
      Config("mse", {{"mechanism", "l2"}, {"n", "3"}, {"trials", "200000"}, {"seed", "9"}});
  const RunResult a = Execute(c);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(Execute(c).out, a.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["theory"].get<double>(), 12.0);
  EXPECT_LE(std::fabs(j["z_score"].get<double>()), 3.0);
  EXPECT_EQ(j["trials"], 200000);
  EXPECT_NE(a.err.find("\"config_hash\""), std::string::npos);
  EXPECT_EQ(Execute(Config("mse", {{"trials", "10"}})).code, 2);
}

TEST(Audit, DensityExamples) {
  const Json lap = Json::parse(Execute(Config("audit", {{"density", "laplace1d"}})).out);
  EXPECT_EQ(lap["verdict"], "pass");
  EXPECT_NEAR(lap["lipschitz_estimate"].get<double>(), 1.0, 1e-6);
  const Json stairs = Json::parse(Execute(Config("audit", {{"density", "staircase"}})).out);
  EXPECT_EQ(stairs["verdict"], "divergent");
  for (const char* eps : {"1", "50"}) {
    const RunResult g = Execute(Config("audit", {{"density", "gaussian"}, {"epsilon", eps}}));
    EXPECT_EQ(g.code, 0);
    EXPECT_EQ(Json::parse(g.out)["verdict"], "fail") << eps;
  }
}

TEST(Audit, OtherAuditKinds) {
  const Json dp = Json::parse(
      Execute(Config("audit", {{"audit", "dp-ratio"}, {"mechanism", "l2"}, {"n", "2"},
                               {"alpha", "0.5"}, {"trials", "50000"}}))
          .out);
  EXPECT_EQ(dp["verdict"], "pass");
  const Json pp = Json::parse(
      Execute(Config("audit", {{"audit", "postprocess"}, {"map", "round"}})).out);
  EXPECT_EQ(pp["verdict"], "pass");
  const Json cdf = Json::parse(
      Execute(Config("audit", {{"audit", "cdf"}, {"density", "staircase"}, {"trials", "50000"}})).out);
  EXPECT_EQ(cdf["verdict"], "pass");
  const Json gof = Json::parse(
      Execute(Config("audit", {{"audit", "gof"}, {"mechanism", "l2"}, {"n", "3"}, {"trials", "20000"}})).out);
  EXPECT_EQ(gof["verdict"], "pass");
  const RunResult csv = Execute(Config("audit", {{"format", "csv"}}));
  EXPECT_EQ(csv.out.substr(0, 12), "field,value\n");
  EXPECT_EQ(Execute(Config("audit", {{"audit", "dp-ratio"}, {"density", "staircase"}})).code, 2);
}

TEST(Dual, LadderWritesOneFilePerLambda) {
  TempDir dir;
  const std::string out = dir.File("dual.csv");
  const RunResult r = Execute(Config("dual", {{"lambda", "1.6,1.9,2.0,2.2"}, {"output", out}}));
  ASSERT_EQ(r.code, 0) << r.err;
  for (int k = 0; k < 4; ++k) {
    const std::string file = out + ".lambda_" + std::to_string(k) + ".csv";
    ASSERT_TRUE(fs::exists(file)) << file;
    EXPECT_EQ(Read(file).substr(0, 22), "v_or_r,eta,branch_sign");
  }
  const Json summary = Json::parse(Read(out + ".summary.json"));
  std::vector<std::string> verdicts;
  for (const Json& t : summary["trajectories"]) verdicts.push_back(t["verdict"]);
  EXPECT_EQ(verdicts, (std::vector<std::string>{"Feasible", "Feasible", "Infeasible", "Infeasible"}));
  EXPECT_EQ(Read(out).substr(0, 29), "lambda,v_or_r,eta,branch_sign");
}

TEST(Dual, RadialBisection) {
  const RunResult r = Execute(Config(
      "dual", {{"mode", "radial"}, {"n", "2"}, {"bisect", "true"}, {"tol", "0.01"}, {"format", "json"}}));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["certificate"]["lambda_star_estimate"].get<double>(), 6.0, 0.02);
}

TEST(Dual, OverlayAtLambdaStar) {
  const RunResult r = Execute(Config("dual", {{"lambda", "2"}, {"overlay", "true"}}));
  ASSERT_EQ(r.code, 0);
  const NumericView v = *ExtractNumeric(*ParseCsv(r.out));
  ASSERT_EQ(v.dims, 5);
  for (int i = 0; i < v.users; ++i) {
    const double x = v.values[i * 5 + 1];
    EXPECT_NEAR(v.values[i * 5 + 4], -x * (std::fabs(x) + 2.0), 1e-14 * (1 + x * x));
    if (x <= 10.0) {
      EXPECT_NEAR(v.values[i * 5 + 2], v.values[i * 5 + 4], 1e-6 * (1 + x * x));
    }
  }
}

TEST(Dual, InconclusiveAndMissingLambda) {
  const RunResult r = Execute(Config("dual", {{"lambda", "1.9999999"}, {"vmax", "20"}}));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("--vmax"), std::string::npos) << r.err;
  EXPECT_EQ(Execute(Config("dual", {})).code, 2);
}

TEST(Lp, ReportAndConvergence) {
  TempDir dir;
  const std::string out = dir.File("lp.json");
  const RunResult r = Execute(Config("lp", {{"schedule", "default"}, {"output", out}}));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(Read(out));
  EXPECT_EQ(j["status"], "Optimal");
  EXPECT_NEAR(j["primal_objective"].get<double>(), 2.0, 0.04);
  EXPECT_LE(j["gap"].get<double>(), 1e-7);
  EXPECT_TRUE(j["convergence_monotone"].get<bool>());
  const NumericView sol = *ExtractNumeric(*ParseCsv(Read(out + ".solution.csv")));
  const int n = sol.users;
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(sol.values[i * 4 + 2], sol.values[(n - 1 - i) * 4 + 2], 1e-6);
  }
  EXPECT_TRUE(fs::exists(out + ".convergence.csv"));
  EXPECT_EQ(Execute(Config("lp", {{"M", "5"}, {"nu", "0.3"}})).code, 2);
}

TEST(Determinism, EveryCommandTwice) {
  TempDir dir;
  const std::string input = dir.File("in.csv");
  Write(input, "a,b,c\n1,2,3\n4,5,6\n");
  const std::vector<ExperimentConfig> configs = {
      Config("privatize", {{"input", input}, {"seed", "11"}}),
      Config("mse", {{"trials", "5000"}, {"seed", "11"}}),
      Config("audit", {{"audit", "dp-ratio"}, {"mechanism", "l2"}, {"n", "2"}, {"trials", "5000"}, {"seed", "11"}}),
      Config("dual", {{"lambda", "1.9"}}),
      Config("lp", {{"M", "4"}, {"nu", "0.2"}}),
  };
  for (const ExperimentConfig& c : configs) {
    const RunResult a = Execute(c);
    const RunResult b = Execute(c);
    EXPECT_EQ(a.code, 0) << c.command << a.err;
    EXPECT_EQ(a.out, b.out) << c.command;
    EXPECT_FALSE(a.out.empty()) << c.command;
  }
  // A different seed changes the random outputs.
  EXPECT_NE(Execute(configs[0]).out,
            Execute(Config("privatize", {{"input", input}, {"seed", "12"}})).out);
}

}  // namespace
}  // namespace lipdp
