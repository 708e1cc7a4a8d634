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

#include "shiu/shiu_search.hpp"

#include <deque>
#include <sstream>

#include "shiu/errors.hpp"
#include "shiu/primality.hpp"

namespace shiu {

void all_strings(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a, std::uint64_t m,
                 std::uint64_t height_cap, RunMode mode, const std::function<bool(const ShiuString&)>& sink) {
  const std::uint64_t r = normalize_residue(q, a);
  if (m < 2) throw DomainError("m must be >= 2");

  std::deque<std::uint64_t> run;   // current run; trimmed to m in overlapping mode
  std::uint64_t run_length = 0;
  std::uint64_t run_start_index = 0;
  std::uint64_t seen = 0;          // primes visited so far

  auto make = [&](std::uint64_t start_index, std::vector<std::uint64_t> primes) {
    ShiuString s;
    s.q = q;
    s.a = r;
    s.m = m;
    s.start_index = start_index;
    s.diameter = primes.back() - primes.front();
    s.primes = std::move(primes);
    return s;
  };
  auto flush_maximal = [&]() {
    if (mode != RunMode::MaximalOnly || run_length < m) return true;
    ShiuString s = make(run_start_index, {run.begin(), run.end()});
    s.run_length = run_length;
    return sink(s);
  };

  bool keep_going = true;
  if (height_cap > 2) {
    sieve.for_each_prime(2, height_cap, [&](std::uint64_t p) {
      const std::uint64_t index = seen++;
      if (p % q != r) {
        keep_going = flush_maximal();
        run.clear();
        run_length = 0;
        return keep_going;
      }
      if (run_length == 0) run_start_index = index;
      ++run_length;
      run.push_back(p);
      if (mode == RunMode::Overlapping) {
        if (run.size() > m) run.pop_front();
        if (run.size() == m) {
          keep_going = sink(make(index + 1 - m, {run.begin(), run.end()}));
          return keep_going;
        }
      }
      return true;
    });
  }
  if (keep_going) flush_maximal();
}

std::vector<ShiuString> collect_strings(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a,
                                        std::uint64_t m, std::uint64_t height_cap, RunMode mode) {
  std::vector<ShiuString> out;
  all_strings(sieve, q, a, m, height_cap, mode, [&](const ShiuString& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

ShiuString first_string(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a, std::uint64_t m,
                        std::uint64_t height_cap) {
  std::optional<ShiuString> found;
  all_strings(sieve, q, a, m, height_cap, RunMode::Overlapping, [&](const ShiuString& s) {
    found = s;
    return false;
  });
  if (!found) {
    throw NotFoundError("no string of " + std::to_string(m) + " consecutive primes = " + std::to_string(a) +
                        " mod " + std::to_string(q) + " below " + std::to_string(height_cap));
  }
  return *found;
}

std::optional<std::string> reverify(const ShiuString& s) {
  const std::size_t expected = s.run_length ? *s.run_length : s.m;
  if (s.primes.size() != expected || s.primes.size() < 2) return "wrong number of primes";
  for (std::size_t i = 0; i < s.primes.size(); ++i) {
    const std::uint64_t p = s.primes[i];
    if (!is_prime_u64(p)) return std::to_string(p) + " is not prime";
    if (p % s.q != s.a) return std::to_string(p) + " is not = " + std::to_string(s.a) + " mod " + std::to_string(s.q);
    if (i == 0) continue;
    const std::uint64_t prev = s.primes[i - 1];
    if (p <= prev) return "primes are not ascending";
    for (std::uint64_t v = prev + 1; v < p; ++v) {
      if (is_prime_u64(v)) return "prime " + std::to_string(v) + " lies between " + std::to_string(prev) + " and " + std::to_string(p);
    }
  }
  if (s.diameter != s.primes.back() - s.primes.front()) return "diameter does not match primes";
  if (s.diameter < (s.primes.size() - 1) * s.q) return "diameter below (m-1)*q";
  return std::nullopt;
}

DiameterStats DiameterAccumulator::finish(std::uint64_t bucket_width, std::optional<std::uint64_t> bound) const {
  if (bucket_width == 0) throw DomainError("bucket width must be positive");
  DiameterStats stats;
  stats.bound = bound;
  if (counts_.empty()) return stats;

  for (const auto& [d, c] : counts_) {
    stats.count += c;
    if (bound && d <= *bound) stats.count_within_bound += c;
  }
  stats.min = counts_.begin()->first;
  stats.max = counts_.rbegin()->first;

  // Median: mean of the two middle order statistics for even counts.
  const std::uint64_t lower_rank = (stats.count - 1) / 2;
  const std::uint64_t upper_rank = stats.count / 2;
  std::uint64_t seen = 0;
  std::optional<std::uint64_t> lower, upper;
  for (const auto& [d, c] : counts_) {
    if (!lower && lower_rank < seen + c) lower = d;
    if (!upper && upper_rank < seen + c) upper = d;
    seen += c;
  }
  stats.median = (static_cast<double>(*lower) + static_cast<double>(*upper)) / 2.0;

  const std::uint64_t first_bucket = stats.min / bucket_width;
  const std::uint64_t last_bucket = stats.max / bucket_width;
  for (std::uint64_t b = first_bucket; b <= last_bucket; ++b) {
    stats.buckets.push_back({b * bucket_width, (b + 1) * bucket_width, 0});
  }
  for (const auto& [d, c] : counts_) stats.buckets[d / bucket_width - first_bucket].count += c;
  return stats;
}

DiameterStats diameter_stats(const std::vector<ShiuString>& strings, std::uint64_t bucket_width,
                             std::optional<std::uint64_t> bound) {
  DiameterAccumulator acc;
  for (const auto& s : strings) acc.add(s);
  return acc.finish(bucket_width, bound);
}

nlohmann::ordered_json to_json(const ShiuString& s) {
  nlohmann::ordered_json out;
  out["q"] = s.q;
  out["a"] = s.a;
  out["m"] = s.m;
  out["start_prime"] = s.primes.front();
  out["start_index"] = s.start_index;
  out["primes"] = s.primes;
  out["diameter"] = s.diameter;
  if (s.run_length) out["run_length"] = *s.run_length;
  return out;
}

std::string diameter_stats_csv(const DiameterStats& stats) {
  std::ostringstream out;
  out << "bucket_lo,bucket_hi,count\n";
  for (const auto& b : stats.buckets) out << b.lo << "," << b.hi << "," << b.count << "\n";
  out << "\nstrings,min,median,max,B,count_le_B\n";
  out << stats.count << ",";
  if (stats.count > 0) {
    std::ostringstream median;
    median << stats.median;
    out << stats.min << "," << median.str() << "," << stats.max;
  } else {
    out << ",,";
  }
  out << ",";
  if (stats.bound) out << *stats.bound << "," << stats.count_within_bound;
  else out << ",";
  out << "\n";
  return out.str();
}

}  // namespace shiu
