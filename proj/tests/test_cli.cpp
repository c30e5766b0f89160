/*
 * Copyright 2026 The condatom Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fixtures.hpp"

using namespace condatom;
using fixtures::q;

namespace {

const char* kMinimal = R"({"space": {"fibers": [{"weight": "1", "densities": ["1"]}]}})";

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load(const std::string& name) { return parse_scenario(read(std::string(CONDATOM_SCENARIOS) + "/" + name)); }

struct Invocation {
  int exit_code;
  std::string out;
};

Invocation invoke(const std::string& args) {
  std::string cmd = std::string(CONDATOM_CLI) + " " + args + " 2>/dev/null";
  Invocation r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("minimal scenario parses", "[cli]") {
  Scenario sc = parse_scenario(kMinimal);
  CHECK(sc.space == fixtures::lebesgue_space());
  CHECK(sc.sets.empty());
  CHECK_FALSE(sc.h.has_value());
  CHECK_FALSE(sc.measures.has_value());
}

TEST_CASE("scenario rejections name the problem", "[cli]") {
  const char* weights = R"({"space": {"fibers": [
      {"weight": "1/2", "densities": ["1"]},
      {"weight": "3/8", "densities": ["1"]}]}})";
  CHECK_THROWS_WITH(parse_scenario(weights), Catch::Matchers::ContainsSubstring("fiber weights sum to 7/8, expected 1"));

  const char* atom = R"({"space": {"fibers": [{"weight": "1", "densities": ["1/2"],
      "atoms": [{"location": "3/2", "weight": "1/2"}]}]}})";
  CHECK_THROWS_WITH(parse_scenario(atom), Catch::Matchers::ContainsSubstring("location 3/2 outside [0,1]"));

  CHECK_THROWS_AS(parse_scenario(R"({"space": {"fibers": []}, "extra": 1})"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"space": {"fibers": [{"weight": 1, "densities": ["1"]}]}})"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"sets": {}})"), ParseError);
  std::string undefined = R"({"space": {"fibers": [{"weight": "1", "densities": ["1"]}]}, "params": {"set": "Z"}})";
  CHECK_THROWS_AS(parse_scenario(undefined), Error);
  std::string bad_h = R"({"space": {"fibers": [{"weight": "1", "densities": ["1"]}]}, "h": ["3/2"]})";
  CHECK_THROWS_AS(parse_scenario(bad_h), Error);
}

TEST_CASE("malformed JSON reports line and column", "[cli]") {
  try {
    parse_scenario("{\n  \"space\": {\n    \"fibers\": [,]\n  }\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("column"));
  }
}

TEST_CASE("run check and split on shipped scenarios", "[cli]") {
  Scenario leb = load("lebesgue.json");
  Report check = run("check", &leb);
  CHECK(check.exit_code == kExitOk);
  CHECK(check.body["verdict"] == "atomless");

  Report split_report = run("split", &leb);
  CHECK(split_report.exit_code == kExitOk);
  Json expected = Json::array({{{"intervals", Json::array({Json::array({"0", "1/2"})})}, {"atoms", Json::array()}}});
  CHECK(split_report.body["result"] == expected);

  Scenario atom = load("atom.json");
  CHECK(run("check", &atom).exit_code == kExitCheckFailed);
  CHECK(run("kernel", &atom).exit_code == kExitCheckFailed);
  CHECK(run("split", &atom).exit_code == kExitInputError);

  Scenario mix = load("mixture.json");
  Report dens = run("densities", &mix);
  CHECK(dens.exit_code == kExitOk);
  CHECK(dens.body["blocks"] == 2);
}

TEST_CASE("every command runs on the two-fiber scenario", "[cli]") {
  Scenario sc = load("two_fiber.json");
  for (auto c : known_commands()) {
    if (c == "selftest" || c == "densities") continue;
    INFO(std::string(c));
    CHECK(run(c, &sc).exit_code == kExitOk);
  }
  CHECK(run("densities", &sc).exit_code == kExitInputError);
  Report scan = run("scan", &sc);
  CHECK(scan.body["cond_expectation"] == Json::array({"1/4", "1/2"}));
}

TEST_CASE("usage errors exit with status 2", "[cli]") {
  Scenario sc = load("lebesgue.json");
  CHECK(run("frobnicate", &sc).exit_code == kExitInputError);
  CHECK(run("check", nullptr).exit_code == kExitInputError);
}

TEST_CASE("selftest is deterministic", "[cli]") {
  RunOptions opts{42, 4, 5};
  Report a = run("selftest", nullptr, opts);
  Report b = run("selftest", nullptr, opts);
  CHECK(a.exit_code == kExitOk);
  CHECK(a.text() == b.text());
}

TEST_CASE("generator is deterministic and honours the atom probability", "[cli]") {
  GeneratorParams gp;
  gp.measure_count = 2;
  gp.event_count = 2;
  Instance a = generate_instance(99, gp);
  Instance b = generate_instance(99, gp);
  CHECK(a.space == b.space);
  CHECK(a.events == b.events);
  CHECK(a.measures == b.measures);

  for (std::uint64_t k = 0; k < 20; ++k) {
    GeneratorParams none;
    CHECK(is_conditionally_atomless(generate_instance(k, none).space).atomless());
    GeneratorParams all;
    all.atom_probability = 1;
    Instance inst = generate_instance(k, all);
    CHECK_FALSE(is_conditionally_atomless(inst.space).atomless());
    for (const auto& f : inst.space.fibers()) CHECK_FALSE(f.measure.atoms().empty());
  }
}

TEST_CASE("scenarios round-trip byte for byte", "[cli][property]") {
  for (std::uint64_t k = 0; k < 30; ++k) CHECK(props::scenario_round_trip(mix_seed(51, 1, k)).ok);
}

TEST_CASE("command-line tool exit codes and determinism", "[cli]") {
  const std::string dir = CONDATOM_SCENARIOS;
  CHECK(invoke("check --scenario " + dir + "/lebesgue.json").exit_code == 0);
  CHECK(invoke("check --scenario " + dir + "/atom.json").exit_code == 1);
  CHECK(invoke("split --scenario " + dir + "/atom.json").exit_code == 2);
  CHECK(invoke("check --scenario " + dir + "/missing.json").exit_code == 2);
  CHECK(invoke("check").exit_code == 2);
  CHECK(invoke("bogus --scenario " + dir + "/lebesgue.json").exit_code == 2);
  Invocation a = invoke("selftest --seed 7 --count 3 --depth 3");
  Invocation b = invoke("selftest --seed 7 --count 3 --depth 3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == run("selftest", nullptr, RunOptions{7, 3, 3}).text());
}
