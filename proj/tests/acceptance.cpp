// Copyright 2026 The shiu-strings Authors
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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "shiu/bound_lab.hpp"
#include "shiu/construction.hpp"
#include "shiu/errors.hpp"
#include "shiu/shiu_search.hpp"
#include "shiu/tuples.hpp"

using namespace shiu;

namespace {

// Runtime limits in seconds; 0 means the criterion has none.
constexpr double kLimitAdmissibility = 10.0;
constexpr double kLimitGrid = 120.0;
constexpr double kLimitWindows = 60.0;
constexpr double kLimitStrings = 30.0;

constexpr std::uint64_t kGridQMax = 30;
constexpr std::uint64_t kGridKMax = 12;
constexpr std::uint64_t kStringCap = 1'000'000;
constexpr std::uint64_t kScanNMax = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit;
  std::function<Outcome()> run;
};

std::shared_ptr<const SegmentedSieve> shared_sieve() {
  static const auto sieve = std::make_shared<const SegmentedSieve>(SieveConfig{});
  return sieve;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> coprime_pairs(std::uint64_t q_min, std::uint64_t q_max) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t q = q_min; q <= q_max; ++q)
    for (std::uint64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) out.emplace_back(q, a);
  return out;
}

// Criterion-2 constructions, built once and shared by criteria 2 and 8.
const std::vector<Construction>& grid_constructions() {
  static const std::vector<Construction> built = [] {
    std::vector<Construction> out;
    for (auto [q, a] : coprime_pairs(3, kGridQMax))
      for (std::uint64_t k = 2; k <= kGridKMax; ++k)
        out.push_back(build(ConstructionParams::make(q, static_cast<std::int64_t>(a), k), shared_sieve()));
    return out;
  }();
  return built;
}

Outcome admissibility_oracle() {
  std::mt19937_64 rng(20261018);
  std::uniform_int_distribution<int> k_dist(1, 8), g_dist(1, 50), h_dist(-200, 200), small_g(1, 3);
  int disagreements = 0, inadmissible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = k_dist(rng);
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    while (static_cast<int>(pairs.size()) < k) {
      const std::int64_t g = rng() % 2 ? g_dist(rng) : small_g(rng);
      const std::int64_t h = h_dist(rng);
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(g, h)) == pairs.end()) pairs.emplace_back(g, h);
    }
    std::vector<LinearForm> forms;
    for (auto [g, h] : pairs) forms.push_back({BigInt(static_cast<long>(g)), BigInt(static_cast<long>(h))});
    const bool expected = oracle::admissible(pairs);
    inadmissible += !expected;
    if (is_admissible(KTuple(std::move(forms))).admissible != expected) ++disagreements;
  }
  return {disagreements == 0, "500 tuples (" + std::to_string(inadmissible) + " inadmissible), " +
                                  std::to_string(disagreements) + " disagreements"};
}

Outcome construction_grid() {
  std::size_t failures = 0, blocked_total = 0;
  std::string first_failure;
  for (const Construction& c : grid_constructions()) {
    try {
      const std::uint64_t first = c.offsets.front(), last = c.offsets.back();
      if (!(c.params.k < first && last < first * first)) throw InternalError("t condition fails");
      if (!verify_admissible(c).admissible) throw InternalError("not admissible");
      const auto blocked = verify_isolation(c);
      if (blocked.size() != c.B + 1 - c.params.k) throw InternalError("incomplete blocking list");
      blocked_total += blocked.size();
    } catch (const std::exception& e) {
      if (failures++ == 0)
        first_failure = " first: q=" + std::to_string(c.params.q) + " a=" + std::to_string(c.params.a) +
                        " k=" + std::to_string(c.params.k) + ": " + e.what();
    }
  }
  return {failures == 0, std::to_string(grid_constructions().size()) + " constructions, " +
                             std::to_string(blocked_total) + " blocked values, " + std::to_string(failures) +
                             " failures" + first_failure};
}

Outcome worked_example() {
  const Construction c = build(ConstructionParams::make(3, 1, 5), shared_sieve());
  const std::vector<std::uint64_t> offsets{7, 13, 19, 31, 37};
  const std::vector<std::uint64_t> g_factors{2, 3, 5, 11, 17, 23, 29};
  const bool ok = c.t == 0 && c.offsets == offsets && c.g_factors == g_factors && to_decimal(c.g()) == "3741870" &&
                  oracle::decimal_product(c.g_factors) == "3741870" && c.B == 30 &&
                  oracle::minimal_t(3, 1, 5) == 0 && oracle::ap_primes(3, 1, 5) == offsets;
  return {ok, "t=" + std::to_string(c.t) + " g=" + to_decimal(c.g()) + " B=" + std::to_string(c.B)};
}

Outcome window_semantics() {
  const Construction c = build(ConstructionParams::make(3, 1, 5), shared_sieve());
  const auto reports = scan_windows(c, 1, kScanNMax, 4);
  const std::uint64_t coefficient = to_u64(c.coefficient());
  std::size_t violations = 0, primes_seen = 0, multi = 0;
  if (reports.size() != kScanNMax) ++violations;
  for (const auto& r : reports) {
    if (!r.congruence_ok || !r.isolation_ok || r.probable || r.degenerate) ++violations;
    // Independent exhaustive pass with trial division.
    std::vector<std::uint64_t> found;
    for (std::uint64_t h = c.offsets.front(); h <= c.offsets.back(); ++h) {
      const std::uint64_t v = coefficient * r.n + h;
      if (!oracle::is_prime(v)) continue;
      if (!std::binary_search(c.offsets.begin(), c.offsets.end(), h) || v % 3 != 1) ++violations;
      found.push_back(h);
    }
    if (found != r.prime_offsets || found.size() != r.window_prime_count) ++violations;
    // Primes sharing a window are adjacent in the sequence of all primes.
    for (std::size_t i = 1; i < found.size(); ++i)
      for (std::uint64_t v = coefficient * r.n + found[i - 1] + 1; v < coefficient * r.n + found[i]; ++v)
        if (oracle::is_prime(v)) ++violations;
    primes_seen += found.size();
    multi += found.size() >= 2;
  }
  return {violations == 0, std::to_string(reports.size()) + " windows, " + std::to_string(primes_seen) +
                               " primes, " + std::to_string(multi) + " windows with >= 2 primes, " +
                               std::to_string(violations) + " violations"};
}

std::vector<ShiuString>& found_strings() {
  static std::vector<ShiuString> strings;
  return strings;
}

Outcome first_occurrences() {
  const auto primes = oracle::primes_up_to(kStringCap);
  std::size_t mismatches = 0, not_found = 0;
  found_strings().clear();
  for (auto [q, a] : coprime_pairs(3, 12)) {
    for (std::uint64_t m : {2, 3}) {
      const auto expected = oracle::first_run(q, a, m, primes, kStringCap);
      try {
        const ShiuString s = first_string(*shared_sieve(), q, static_cast<std::int64_t>(a), m, kStringCap);
        if (s.primes != expected) ++mismatches;
        found_strings().push_back(s);
      } catch (const NotFoundError&) {
        ++not_found;
        if (!expected.empty()) ++mismatches;
      }
    }
  }
  using P = std::vector<std::uint64_t>;
  for (auto [q, a, want] : {std::tuple{4, 1, P{13, 17}}, std::tuple{3, 1, P{31, 37}}, std::tuple{4, 3, P{7, 11}}})
    if (first_string(*shared_sieve(), q, a, 2, kStringCap).primes != want) ++mismatches;
  return {mismatches == 0, std::to_string(found_strings().size()) + " strings found, " + std::to_string(not_found) +
                               " absent below 10^6, " + std::to_string(mismatches) + " mismatches"};
}

Outcome diameter_law() {
  std::size_t failures = 0;
  for (const ShiuString& s : found_strings())
    if (s.diameter < (s.m - 1) * s.q || reverify(s)) ++failures;
  return {failures == 0 && !found_strings().empty(),
          std::to_string(found_strings().size()) + " strings re-verified, " + std::to_string(failures) + " failures"};
}

Outcome bound_lab_soundness() {
  const LinnikConfig cfg{5.0};
  std::size_t window_false = 0, bad_b = 0;
  for (auto [q, a] : coprime_pairs(3, kGridQMax)) {
    APIndex idx(shared_sieve(), q, static_cast<std::int64_t>(a));
    for (std::uint64_t k = 2; k <= kGridKMax; ++k) window_false += !verify_t_window(idx, k, cfg);
  }
  const BoundGrid grid{3, kGridQMax, ResiduePolicy::all_coprime(), 2, kGridKMax};
  const auto serial = bound_table(shared_sieve(), grid, cfg, 1);
  const auto again = bound_table(shared_sieve(), grid, cfg, 1);
  const auto parallel = bound_table(shared_sieve(), grid, cfg, 8);
  const bool deterministic = serial == again && serial == parallel;
  for (const auto& r : serial)
    if (r.error || r.B == 0 || r.B % r.q != 0) ++bad_b;
  return {window_false == 0 && deterministic && bad_b == 0,
          std::to_string(serial.size()) + " rows, " + std::to_string(window_false) + " window misses, " +
              (deterministic ? "deterministic" : "NOT deterministic") + ", " + std::to_string(bad_b) + " bad B"};
}

Outcome certificate_round_trip() {
  std::size_t failures = 0;
  for (const Construction& c : grid_constructions()) {
    const std::string text = certificate_text(c);
    const CertificateCheck check = verify_certificate(text, shared_sieve());
    const bool lossless = certificate_from_json(nlohmann::ordered_json::parse(text)) == c;
    if (!check.fields_match || !check.byte_exact || !lossless || !check.rederived || !(*check.rederived == c))
      ++failures;
  }
  return {failures == 0, std::to_string(grid_constructions().size()) + " certificates, " + std::to_string(failures) +
                             " failures"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "admissibility oracle equivalence", kLimitAdmissibility, admissibility_oracle},
      {2, "construction validity grid", kLimitGrid, construction_grid},
      {3, "worked example match", 0, worked_example},
      {4, "window semantics", kLimitWindows, window_semantics},
      {5, "first string occurrences", kLimitStrings, first_occurrences},
      {6, "diameter law", 0, diameter_law},
      {7, "bound lab soundness", 0, bound_lab_soundness},
      {8, "certificate round trip", 0, certificate_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit == 0 || seconds < c.limit;
    const bool pass = outcome.pass && in_time;
    failed += !pass;
    std::ostringstream timing;
    timing.precision(2);
    timing << std::fixed << seconds << " s";
    if (c.limit > 0) timing << " (limit " << c.limit << " s)";
    std::printf("%s %d %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), outcome.detail.c_str(),
                timing.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
