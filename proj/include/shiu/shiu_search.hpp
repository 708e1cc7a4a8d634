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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiu/prime_engine.hpp"

namespace shiu {

/// m consecutive primes p_{n+1}, ..., p_{n+m}, all = a (mod q).
struct ShiuString {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t m = 0;
  std::uint64_t start_index = 0;  // n: number of primes below primes.front()
  std::vector<std::uint64_t> primes;
  std::uint64_t diameter = 0;
  /// Length of the maximal run; only meaningful in maximal-only mode, where
  /// `primes` holds the whole run.
  std::optional<std::uint64_t> run_length;

  friend bool operator==(const ShiuString&, const ShiuString&) = default;
};

enum class RunMode {
  Overlapping,  // a run of length r yields r - m + 1 strings
  MaximalOnly,  // a run of length r >= m yields one record
};

inline constexpr std::uint64_t kDefaultHeightCap = 100'000'000;

/// Streams every string made of primes below height_cap, in order of their
/// first prime, until `sink` returns false. Any prime not = a (mod q) resets
/// the run, including 2 and the divisors of q.
void all_strings(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a, std::uint64_t m,
                 std::uint64_t height_cap, RunMode mode, const std::function<bool(const ShiuString&)>& sink);

std::vector<ShiuString> collect_strings(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a,
                                        std::uint64_t m, std::uint64_t height_cap,
                                        RunMode mode = RunMode::Overlapping);

/// The least-starting string below height_cap. Throws NotFoundError.
ShiuString first_string(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a, std::uint64_t m,
                        std::uint64_t height_cap = kDefaultHeightCap);

/// Re-checks a string without the sieve: each member prime, each = a mod q,
/// no prime strictly between neighbours, diameter consistent and at least
/// (m - 1) * q. Returns a description of the first failure.
std::optional<std::string> reverify(const ShiuString& s);

struct DiameterBucket {
  std::uint64_t lo;
  std::uint64_t hi;  // exclusive
  std::uint64_t count;

  friend bool operator==(const DiameterBucket&, const DiameterBucket&) = default;
};

struct DiameterStats {
  std::vector<DiameterBucket> buckets;  // contiguous from the min bucket to the max bucket
  std::uint64_t count = 0;
  std::uint64_t min = 0;
  double median = 0.0;
  std::uint64_t max = 0;
  std::optional<std::uint64_t> bound;  // B of a construction, if supplied
  std::uint64_t count_within_bound = 0;
};

/// Streaming histogram of diameters.
class DiameterAccumulator {
 public:
  void add(std::uint64_t diameter) { ++counts_[diameter]; }
  void add(const ShiuString& s) { add(s.diameter); }
  DiameterStats finish(std::uint64_t bucket_width, std::optional<std::uint64_t> bound = std::nullopt) const;

 private:
  std::map<std::uint64_t, std::uint64_t> counts_;
};

DiameterStats diameter_stats(const std::vector<ShiuString>& strings, std::uint64_t bucket_width,
                             std::optional<std::uint64_t> bound = std::nullopt);

nlohmann::ordered_json to_json(const ShiuString& s);

/// Histogram section "bucket_lo,bucket_hi,count", a blank line, then the
/// summary section "strings,min,median,max,B,count_le_B".
std::string diameter_stats_csv(const DiameterStats& stats);

}  // namespace shiu
