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

// condatom <command> --scenario <path> [--seed N] [--depth N] [--count N] [--out <path>]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "condatom/commands.hpp"
#include "condatom/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw condatom::ParseError("cannot open scenario file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conditional-atomlessness toolkit"};
  std::string command;
  std::string scenario_path;
  std::string out_path;
  condatom::RunOptions options;

  std::string commands;
  for (auto c : condatom::known_commands()) commands += (commands.empty() ? "" : ", ") + std::string(c);
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("--scenario", scenario_path, "Scenario JSON file");
  app.add_option("--seed", options.seed, "Seed for selftest (overrides params.seed)");
  app.add_option("--depth", options.depth, "Dyadic depth (overrides params.depth)");
  app.add_option("--count", options.count, "Instances per selftest suite (overrides params.count)");
  app.add_option("--out", out_path, "Write the report here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : condatom::kExitInputError;
  }

  condatom::Report report;
  try {
    std::optional<condatom::Scenario> scenario;
    if (!scenario_path.empty()) scenario = condatom::parse_scenario(read_file(scenario_path));
    report = condatom::run(command, scenario ? &*scenario : nullptr, options);
  } catch (const condatom::Error& e) {
    report.body = condatom::Json::object();
    report.body["command"] = command;
    report.body["status"] = "error";
    report.body["error"] = e.what();
    report.body["exit_code"] = static_cast<int>(condatom::kExitInputError);
    report.exit_code = condatom::kExitInputError;
  }

  if (out_path.empty()) {
    std::cout << report.text();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return condatom::kExitInputError;
    }
    out << report.text();
  }
  if (report.exit_code == condatom::kExitInputError && report.body.contains("error")) {
    std::cerr << "error: " << report.body["error"].get<std::string>() << "\n";
  }
  return report.exit_code;
}
