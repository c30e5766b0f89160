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

// Acceptance suite: one line per criterion, exact equality everywhere.
// Exit status 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "condatom/condatom.hpp"

using namespace condatom;

namespace {

constexpr std::uint64_t kSeed = 20260316;

struct Outcome {
  bool ok;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string tally_text(const Tally& t) {
  std::string s = t.name + " " + std::to_string(t.passed) + "/" + std::to_string(t.passed + t.failed);
  if (!t.ok()) s += " [" + t.first_failure + "]";
  return s;
}

Outcome from_tallies(std::initializer_list<Tally> tallies) {
  Outcome o{true, {}};
  for (const auto& t : tallies) {
    o.ok = o.ok && t.ok();
    o.detail += (o.detail.empty() ? "" : "; ") + tally_text(t);
  }
  return o;
}

std::string run_cli_selftest(const std::string& cli) {
  std::string cmd = cli + " selftest --seed 42 --count 10 --depth 5";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;

  auto criterion = [&](int id, const std::string& title, double time_limit, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double elapsed = seconds_since(start);
    bool in_time = time_limit <= 0 || elapsed < time_limit;
    bool ok = o.ok && in_time;
    if (!ok) ++failures;
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << o.detail;
    line.precision(2);
    line << std::fixed << " (" << elapsed << " s";
    if (time_limit > 0) line << ", limit " << time_limit << " s";
    line << ")";
    std::cout << line.str() << std::endl;
  };

  criterion(1, "split exactness on 200 random atomless instances", 5.0, [] {
    return from_tallies({run_suite("split_exactness", kSeed, 1, 200, props::split_exactness)});
  });

  // Criteria 2, 3 and 8 share their 20 instances (stream 2).
  criterion(2, "dyadic family, depth 10, 20 instances", 10.0, [] {
    return from_tallies({run_suite("dyadic_family", kSeed, 2, 20, [](auto s) { return props::dyadic_family(s, 10); })});
  });

  criterion(3, "uniform pushforward, 1024 levels + hat family", 0, [] {
    return from_tallies({run_suite("uniform_pushforward", kSeed, 2, 20, [](auto s) { return props::uniform_pushforward(s, 1024); })});
  });

  criterion(4, "kernel scan vs atomless verdict, 200 instances, atom probability 1/2", 0, [] {
    std::size_t atomless = 0;
    for (std::size_t k = 0; k < 200; ++k) {
      GeneratorParams gp;
      gp.atom_probability = Scalar(1, 2);
      if (is_conditionally_atomless(generate_instance(mix_seed(kSeed, 4, k), gp).space).atomless()) ++atomless;
    }
    Outcome o = from_tallies({run_suite("kernel_agreement", kSeed, 4, 200, [](auto s) { return props::kernel_agreement(s, 20); })});
    o.detail += " (" + std::to_string(atomless) + " atomless instances with 20 strict splits each)";
    o.ok = o.ok && atomless > 0;
    return o;
  });

  criterion(5, "shrink chain n = 20 on 20 instances", 0, [] {
    return from_tallies({run_suite("shrink_chain", kSeed, 5, 20, [](auto s) { return props::shrink_chain(s, 20); })});
  });

  criterion(6, "splitting-level scan + Lipschitz at depth 8, 100 pairs", 0, [] {
    return from_tallies({run_suite("splitting_scan", kSeed, 6, 100, [](auto s) { return props::splitting_scan(s, 8); })});
  });

  criterion(7, "density partitions equal mod null (100) + refinement agreement (100)", 0, [] {
    return from_tallies({run_suite("mixture_invariance", kSeed, 7, 100, props::mixture_invariance),
                         run_suite("refinement_agreement", kSeed, 8, 100, props::refinement_agreement)});
  });

  criterion(8, "dyadic construction vs direct left-fill to depth 10", 0, [] {
    return from_tallies({run_suite("oracle_agreement", kSeed, 2, 20, [](auto s) { return props::oracle_agreement(s, 10); })});
  });

  criterion(9, "selftest byte-identical across runs + 50 scenario round trips", 0, [&cli] {
    Outcome o{true, {}};
    std::string first = run(std::string("selftest"), nullptr, RunOptions{42, 5, 10}).text();
    std::string second = run(std::string("selftest"), nullptr, RunOptions{42, 5, 10}).text();
    o.ok = first == second;
    o.detail = std::string("in-process reports ") + (o.ok ? "identical" : "differ");
    if (!cli.empty()) {
      std::string a = run_cli_selftest(cli);
      std::string b = run_cli_selftest(cli);
      bool same = !a.empty() && a == b;
      o.ok = o.ok && same;
      o.detail += std::string(", CLI reports ") + (same ? "identical" : "differ");
    }
    Tally rt = run_suite("scenario_round_trip", kSeed, 11, 50, props::scenario_round_trip);
    o.ok = o.ok && rt.ok();
    o.detail += "; " + tally_text(rt);
    return o;
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
