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

#include <bit>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace shiu {

struct SieveConfig {
  /// Integers covered by one sieve segment.
  std::uint64_t segment_width = std::uint64_t{1} << 18;
  /// Largest integer any search may touch.
  std::uint64_t height_ceiling = std::uint64_t{1} << 40;
  /// Memory budget for prime lists, segments and adopted caches.
  std::uint64_t budget_bytes = std::uint64_t{512} << 20;

  /// Defaults, with budget_bytes taken from SHIU_SIEVE_BUDGET_MB when set.
  static SieveConfig from_environment();

  /// Throws DomainError on a zero width and ResourceError when one segment
  /// alone would exceed the budget.
  void validate() const;
};

/// Primality flags for the half-open interval [lo, hi), bit i <=> lo + i.
class SieveSegment {
 public:
  SieveSegment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t width() const { return hi_ - lo_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool is_prime(std::uint64_t n) const;
  std::uint64_t count() const;
  std::vector<std::uint64_t> primes() const;

  template <class F>
  bool for_each_prime(F&& visit) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<std::uint64_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (!visit(lo_ + 64 * w + bit)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const SieveSegment&, const SieveSegment&) = default;

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> words_;
};

/// Segmented sieve of Eratosthenes. Base primes grow on demand behind a
/// mutex; every query is safe to call concurrently.
class SegmentedSieve {
 public:
  explicit SegmentedSieve(SieveConfig config = {});

  const SieveConfig& config() const { return config_; }

  /// Flags for [lo, hi); requires 2 <= lo < hi <= height_ceiling + 1.
  SieveSegment segment(std::uint64_t lo, std::uint64_t hi) const;

  /// All primes <= y, ascending.
  std::vector<std::uint64_t> primes_up_to(std::uint64_t y) const;

  /// Visits primes in [lo, hi) in ascending order, one segment at a time,
  /// until `visit` returns false. Returns false iff stopped early.
  template <class F>
  bool for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& visit) const {
    if (lo < 2) lo = 2;
    for (std::uint64_t start = lo; start < hi;) {
      const std::uint64_t end = hi - start > config_.segment_width ? start + config_.segment_width : hi;
      if (!segment(start, end).for_each_prime(visit)) return false;
      start = end;
    }
    return true;
  }

  /// Serves later queries below the cache height from precomputed segments.
  /// The segments must be contiguous starting at 2.
  void adopt_cache(const std::vector<SieveSegment>& segments);
  std::uint64_t cached_height() const { return cache_ ? cache_->hi() : 0; }

 private:
  std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint64_t limit) const;
  SieveSegment slice_cache(std::uint64_t lo, std::uint64_t hi) const;

  SieveConfig config_;
  mutable std::mutex base_mutex_;
  mutable std::shared_ptr<const std::vector<std::uint32_t>> base_;
  mutable std::uint64_t base_limit_ = 0;
  std::optional<SieveSegment> cache_;
};

/// Returns a reduced into [0, q). Throws DomainError unless q >= 3 and
/// gcd(a, q) = 1.
std::uint64_t normalize_residue(std::uint64_t q, std::int64_t a);

/// The primes l_1 < l_2 < ... with l = a (mod q), discovered lazily and
/// memoized. Extension mutates the cache, so one index must not be shared
/// between threads without external serialization.
class APIndex {
 public:
  APIndex(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a);

  std::uint64_t q() const { return q_; }
  std::uint64_t a() const { return a_; }

  /// l_n for n >= 1.
  std::uint64_t nth(std::uint64_t n);

  std::span<const std::uint64_t> cached() const { return cache_; }
  const SegmentedSieve& sieve() const { return *sieve_; }

 private:
  void extend();

  std::shared_ptr<const SegmentedSieve> sieve_;
  std::uint64_t q_;
  std::uint64_t a_;
  std::vector<std::uint64_t> cache_;
  std::uint64_t scanned_to_ = 2;  // every integer below this has been sieved
};

std::vector<std::uint64_t> primes_up_to(std::uint64_t y);

inline std::uint64_t nth_ap_prime(APIndex& idx, std::uint64_t n) { return idx.nth(n); }

/// pi(y; q, a).
std::uint64_t count_ap_primes(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a,
                              std::uint64_t y);

// Sieve cache file: magic "SHIUSIEV", u64 segment count, then per segment
// u64 lo, u64 hi, u64 word count and the words, all little-endian.
void write_segments(std::ostream& out, std::span<const SieveSegment> segments);
std::vector<SieveSegment> read_segments(std::istream& in);

/// Streams segments covering [2, height] to `path`.
void write_sieve_cache(const SegmentedSieve& sieve, std::uint64_t height,
                       const std::filesystem::path& path);
std::vector<SieveSegment> read_sieve_cache(const std::filesystem::path& path);

}  // namespace shiu
