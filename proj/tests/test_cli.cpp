// Copyright 2026 The qmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmt/cli.hpp"
#include "qmt/io.hpp"
#include "qmt/models.hpp"
#include "qmt/random.hpp"
#include "test_util.hpp"

namespace qmt {
namespace {

namespace fs = std::filesystem;

const fs::path kSamples = QMT_SAMPLES_DIR;

void expect_code(ErrorCode code, const auto& f) {
  try {
    f();
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("qmt_test_" + name);
  std::ofstream(p) << text;
  return p;
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qmt");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scenario_with_state(const std::string& density) {
  Json doc = Json::parse(read_file(kSamples / "scenario.json"));
  doc["states"]["mixed"]["density"] = Json::parse(density);
  return doc.dump();
}

TEST(InstrumentDocument, IdentityRoundTripIsByteIdentical) {
  const std::string text = persist_instrument(testing::identity_instrument(2));
  EXPECT_EQ(persist_instrument(load_instrument(text)), text);
}

TEST(InstrumentDocument, RandomUnsharpRoundTrip) {
  const Instrument inst = random_unsharp(3, 3, 7);
  const Instrument back = load_instrument(persist_instrument(inst));
  EXPECT_EQ(back.kraus(), inst.kraus());
  EXPECT_EQ(back.outcomes(), inst.outcomes());
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const DensityOperator rho = random_density(3, rng);
    for (double x : inst.outcomes()) {
      EXPECT_NEAR(outcome_probability(back, x, rho), outcome_probability(inst, x, rho), 1e-15);
    }
  }
}

TEST(InstrumentDocument, Malformed) {
  const std::string text = persist_instrument(testing::identity_instrument(2));
  expect_code(ErrorCode::ParseError, [&] { load_instrument(text.substr(0, text.size() / 2)); });
  Json doc = Json::parse(text);
  doc["format"] = "other";
  expect_code(ErrorCode::ParseError, [&] { load_instrument(doc.dump()); });
  doc = Json::parse(text);
  doc["extra"] = 1;
  expect_code(ErrorCode::ParseError, [&] { load_instrument(doc.dump()); });
  doc = Json::parse(text);
  doc["kraus"][0][0][0][0] = Json::array({2.0, 0.0});
  expect_code(ErrorCode::ValidationError, [&] { load_instrument(doc.dump()); });
}

TEST(Scenario, SampleParses) {
  const Scenario s = parse_scenario(read_file(kSamples / "scenario.json"));
  EXPECT_EQ(s.dim, 2);
  EXPECT_EQ(s.seed, 3u);
  EXPECT_TRUE(s.state("plus").vector.has_value());
  EXPECT_NO_THROW(s.instrument("wb.A"));
  EXPECT_NO_THROW(s.instrument("wb.B"));
  EXPECT_EQ(s.analyses.size(), 4u);
  EXPECT_THROW(s.instrument("missing"), Error);
}

TEST(Scenario, RoundTripOnRandomInstances) {
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(3));
    Json doc;
    doc["dim"] = d;
    doc["seed"] = rng.below(1000);
    doc["states"]["rho"]["density"] = matrix_to_json(random_density(d, rng).matrix());
    doc["states"]["psi"]["vector"] = vector_to_json(random_unitary(d, rng).col(0));
    doc["observables"]["A"] = matrix_to_json(random_observable(d, rng).matrix());
    doc["instruments"]["LA"] = {{"constructor", "projective"}, {"observable", "A"}};
    doc["instruments"]["U"] = {{"constructor", "random_unsharp"},
                               {"outcomes", 2 + rng.below(2)},
                               {"seed", rng.below(100)}};
    const Json inline_spec = instrument_to_json(random_unsharp(d, 2, rng.next()));
    doc["instruments"]["K"] = inline_spec;
    doc["analyses"] = Json::array({{{"type", "qoe"}, {"a", "LA"}, {"b", "U"}, {"state", "rho"}}});
    const Scenario s = parse_scenario(doc.dump());
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    EXPECT_TRUE(back == s);
    EXPECT_EQ(serialize_scenario(back), text);
  }
}

TEST(Scenario, BadTraceNamesTheState) {
  try {
    parse_scenario(scenario_with_state("[[[0.5,0],[0,0]],[[0,0],[0.6,0]]]"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("state 'mixed'"), std::string::npos) << e.what();
  }
}

TEST(Scenario, Malformed) {
  expect_code(ErrorCode::ParseError, [] { parse_scenario("{\"dim\": 2,"); });
  expect_code(ErrorCode::ParseError, [] { parse_scenario("{\"dim\": 2, \"bogus\": 1}"); });
  Json doc = Json::parse(read_file(kSamples / "scenario.json"));
  doc["analyses"][0]["type"] = "nonsense";
  expect_code(ErrorCode::ParseError, [&] { parse_scenario(doc.dump()); });
  doc = Json::parse(read_file(kSamples / "scenario.json"));
  doc["analyses"][0]["a"] = "missing";
  EXPECT_THROW(parse_scenario(doc.dump()), Error);
}

TEST(Contingency, SampleAndDuplicates) {
  const auto [ab, ba] = ingest_contingency(read_file(kSamples / "poll.csv"));
  EXPECT_EQ(ab[kYes][kYes], 300u);
  EXPECT_EQ(ab[kNo][kNo], 350u);
  EXPECT_EQ(ba[kNo][kYes], 160u);
  const auto [ab2, ba2] = ingest_contingency(
      "order,a_answer,b_answer,count\nAB,y,y,3\nAB,y,y,4\nBA,n,y,2\n");
  EXPECT_EQ(ab2[kYes][kYes], 7u);
  EXPECT_EQ(ba2[kNo][kYes], 2u);
}

TEST(Contingency, Errors) {
  try {
    ingest_contingency("order,a_answer,b_answer,count\nAB,y,y,3\nXY,y,y,3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
  expect_code(ErrorCode::NegativeCount,
              [] { ingest_contingency("order,a_answer,b_answer,count\nAB,y,n,-1\n"); });
  expect_code(ErrorCode::ParseError, [] { ingest_contingency("a,b\nAB,y,y,3\n"); });
  expect_code(ErrorCode::ParseError,
              [] { ingest_contingency("order,a_answer,b_answer,count\nAB,y,maybe,3\n"); });
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli::exit_code_for(ErrorCode::ParseError), cli::kParseOrValidation);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::DegenerateVariance), cli::kNumerical);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::ZeroProbabilityConditioning), cli::kNumerical);
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"report"}).code, cli::kUsage);
}

TEST(Cli, ReportIsDeterministic) {
  const std::string path = (kSamples / "scenario.json").string();
  const RunResult a = run_cli({"report", "--scenario", path});
  const RunResult b = run_cli({"report", "--scenario", path});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["command"], "report");
  EXPECT_EQ(j["provenance"]["tool"], "qmt");
  EXPECT_EQ(j["provenance"]["seed"], 3);
  const RunResult c = run_cli({"report", "--scenario", path, "--seed", "4"});
  EXPECT_EQ(Json::parse(c.out)["provenance"]["seed"], 4);
}

TEST(Cli, ClassifyAndValidate) {
  const std::string path = (kSamples / "scenario.json").string();
  const RunResult r = run_cli({"classify", "--scenario", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"P\""), std::string::npos);
  EXPECT_EQ(run_cli({"validate", "--scenario", path}).code, 0);
  const fs::path inst = write_temp("inst.json", persist_instrument(random_unsharp(2, 2, 3)));
  EXPECT_EQ(run_cli({"validate", "--instrument", inst.string()}).code, 0);
  const fs::path bad = write_temp("bad.json", scenario_with_state("[[[0.5,0],[0,0]],[[0,0],[0.6,0]]]"));
  const RunResult v = run_cli({"validate", "--scenario", bad.string()});
  EXPECT_EQ(v.code, cli::kParseOrValidation);
  EXPECT_NE(v.err.find("ValidationError"), std::string::npos) << v.err;
}

TEST(Cli, QqFromCsv) {
  const RunResult r = run_cli({"qq", "--data", (kSamples / "poll.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["q_hat"].get<double>(), 0.01, 1e-15);
  const fs::path agree = write_temp("agree.csv", "order,a_answer,b_answer,count\nAB,y,y,5\nBA,y,y,5\n");
  EXPECT_EQ(run_cli({"qq", "--data", agree.string()}).code, cli::kNumerical);
  const fs::path bad = write_temp("bad.csv", "order,a_answer,b_answer,count\nXY,y,y,3\n");
  EXPECT_EQ(run_cli({"qq", "--data", bad.string()}).code, cli::kParseOrValidation);
}

TEST(Cli, SearchAndOutFile) {
  const fs::path out = fs::temp_directory_path() / "qmt_test_search.json";
  const RunResult r = run_cli({"search", "--family", "srp4", "--require", "qq>=0.01",
                               "--restarts", "3", "--seed", "1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(read_file(out));
  EXPECT_EQ(j["command"], "search");
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_EQ(run_cli({"search", "--family", "nope", "--require", "qq>=0.01"}).code,
            cli::kParseOrValidation);
}

}  // namespace
}  // namespace qmt
