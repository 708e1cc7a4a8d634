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

#include "shiu/prime_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "shiu/arith.hpp"
#include "shiu/errors.hpp"

namespace shiu {
namespace {

constexpr std::array<char, 8> kCacheMagic = {'S', 'H', 'I', 'U', 'S', 'I', 'E', 'V'};

std::size_t word_count(std::uint64_t width) { return static_cast<std::size_t>((width + 63) / 64); }

void mask_tail(std::vector<std::uint64_t>& words, std::uint64_t width) {
  if (words.empty()) return;
  const unsigned used = static_cast<unsigned>(width % 64);
  if (used != 0) words.back() &= (std::uint64_t{1} << used) - 1;
}

// Upper bound for pi(y) (Rosser-Schoenfeld), used only for budget checks.
double prime_count_upper(std::uint64_t y) {
  if (y < 17) return static_cast<double>(y);
  const double x = static_cast<double>(y);
  return 1.25506 * x / std::log(x);
}

std::vector<std::uint32_t> small_sieve(std::uint64_t limit) {
  std::vector<char> composite(limit + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IoError("sieve cache: truncated input");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

SieveConfig SieveConfig::from_environment() {
  SieveConfig config;
  if (const char* env = std::getenv("SHIU_SIEVE_BUDGET_MB"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (*end != '\0' || mb == 0) {
      throw DomainError(std::string("SHIU_SIEVE_BUDGET_MB must be a positive integer, got '") + env + "'");
    }
    config.budget_bytes = static_cast<std::uint64_t>(mb) << 20;
  }
  return config;
}

void SieveConfig::validate() const {
  if (segment_width == 0) throw DomainError("segment width must be positive");
  if (height_ceiling < 2) throw DomainError("height ceiling must be at least 2");
  if (segment_width / 8 > budget_bytes) {
    throw ResourceError("segment width " + std::to_string(segment_width) +
                        " exceeds sieve budget of " + std::to_string(budget_bytes) + " bytes");
  }
}

SieveSegment::SieveSegment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> words)
    : lo_(lo), hi_(hi), words_(std::move(words)) {
  if (lo < 2 || hi <= lo) {
    throw DomainError("sieve segment requires 2 <= lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  if (words_.size() != word_count(hi - lo)) throw DomainError("sieve segment word count mismatch");
  mask_tail(words_, hi - lo);
}

bool SieveSegment::is_prime(std::uint64_t n) const {
  if (n < lo_ || n >= hi_) throw DomainError("value outside sieve segment");
  const std::uint64_t i = n - lo_;
  return (words_[i / 64] >> (i % 64)) & 1;
}

std::uint64_t SieveSegment::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::vector<std::uint64_t> SieveSegment::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  for_each_prime([&](std::uint64_t p) {
    out.push_back(p);
    return true;
  });
  return out;
}

SegmentedSieve::SegmentedSieve(SieveConfig config)
    : config_(config), base_(std::make_shared<const std::vector<std::uint32_t>>()) {
  config_.validate();
}

std::shared_ptr<const std::vector<std::uint32_t>> SegmentedSieve::base_primes(std::uint64_t limit) const {
  std::lock_guard lock(base_mutex_);
  // Grown geometrically so repeated extension stays linear overall.
  if (base_limit_ < limit) {
    std::uint64_t target = std::max<std::uint64_t>({limit, 1024, 2 * base_limit_});
    target = std::min<std::uint64_t>(target, 0xffffffffULL);
    base_ = std::make_shared<const std::vector<std::uint32_t>>(small_sieve(target));
    base_limit_ = target;
  }
  return base_;
}

SieveSegment SegmentedSieve::segment(std::uint64_t lo, std::uint64_t hi) const {
  if (lo < 2 || hi <= lo) {
    throw DomainError("sieve segment requires 2 <= lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
  if (hi - 1 > config_.height_ceiling) {
    throw ResourceError("height ceiling " + std::to_string(config_.height_ceiling) +
                        " exceeded (requested " + std::to_string(hi - 1) + ")");
  }
  const std::uint64_t width = hi - lo;
  if (width / 8 > config_.budget_bytes) {
    throw ResourceError("segment of width " + std::to_string(width) + " exceeds sieve budget");
  }
  if (cache_ && lo >= cache_->lo() && hi <= cache_->hi()) return slice_cache(lo, hi);

  std::vector<std::uint64_t> words(word_count(width), ~std::uint64_t{0});
  mask_tail(words, width);
  const std::uint64_t root = isqrt(hi - 1);
  const auto base = base_primes(root);
  for (std::uint32_t p32 : *base) {
    const std::uint64_t p = p32;
    if (p > root) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t j = start - lo; j < width; j += p) {
      words[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }
  }
  return SieveSegment(lo, hi, std::move(words));
}

SieveSegment SegmentedSieve::slice_cache(std::uint64_t lo, std::uint64_t hi) const {
  const auto src = cache_->words();
  const std::uint64_t width = hi - lo;
  const std::uint64_t shift = lo - cache_->lo();
  std::vector<std::uint64_t> words(word_count(width));
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t off = shift + 64 * w;
    const std::size_t idx = static_cast<std::size_t>(off / 64);
    const unsigned sh = static_cast<unsigned>(off % 64);
    std::uint64_t v = src[idx] >> sh;
    if (sh != 0 && idx + 1 < src.size()) v |= src[idx + 1] << (64 - sh);
    words[w] = v;
  }
  return SieveSegment(lo, hi, std::move(words));
}

std::vector<std::uint64_t> SegmentedSieve::primes_up_to(std::uint64_t y) const {
  if (y < 2) return {};
  const double bytes = 8.0 * prime_count_upper(y) + static_cast<double>(config_.segment_width) / 8.0;
  if (bytes > static_cast<double>(config_.budget_bytes)) {
    throw ResourceError("primes_up_to(" + std::to_string(y) + ") exceeds sieve budget of " +
                        std::to_string(config_.budget_bytes) + " bytes");
  }
  if (y > config_.height_ceiling) {
    throw ResourceError("height ceiling " + std::to_string(config_.height_ceiling) + " exceeded");
  }
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(prime_count_upper(y)));
  for_each_prime(2, y + 1, [&](std::uint64_t p) {
    out.push_back(p);
    return true;
  });
  return out;
}

void SegmentedSieve::adopt_cache(const std::vector<SieveSegment>& segments) {
  if (segments.empty()) {
    cache_.reset();
    return;
  }
  if (segments.front().lo() != 2) throw IoError("sieve cache must start at 2");
  std::uint64_t hi = segments.front().lo();
  for (const auto& s : segments) {
    if (s.lo() != hi) throw IoError("sieve cache segments are not contiguous");
    hi = s.hi();
  }
  const std::uint64_t width = hi - 2;
  if (width / 8 > config_.budget_bytes) throw ResourceError("sieve cache exceeds sieve budget");

  std::vector<std::uint64_t> words(word_count(width), 0);
  for (const auto& s : segments) {
    s.for_each_prime([&](std::uint64_t p) {
      const std::uint64_t i = p - 2;
      words[i / 64] |= std::uint64_t{1} << (i % 64);
      return true;
    });
  }
  SieveSegment merged(2, hi, std::move(words));

  // Reject corrupted caches by re-sieving a prefix.
  const std::uint64_t check_hi = std::min<std::uint64_t>(hi, 1 << 16);
  cache_.reset();
  if (check_hi > 2) {
    const SieveSegment fresh = segment(2, check_hi);
    for (std::uint64_t n = 2; n < check_hi; ++n) {
      if (fresh.is_prime(n) != merged.is_prime(n)) throw IoError("sieve cache failed integrity check");
    }
  }
  cache_ = std::move(merged);
}

std::uint64_t normalize_residue(std::uint64_t q, std::int64_t a) {
  if (q < 3) throw DomainError("q must be >= 3");
  const std::uint64_t r = mod_floor(a, q);
  if (gcd_u64(r, q) != 1) throw DomainError("gcd(a,q) != 1");
  return r;
}

APIndex::APIndex(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a)
    : sieve_(std::move(sieve)), q_(q), a_(normalize_residue(q, a)) {
  if (!sieve_) throw DomainError("APIndex requires a sieve");
}

std::uint64_t APIndex::nth(std::uint64_t n) {
  if (n == 0) throw DomainError("AP prime index is 1-based");
  while (cache_.size() < n) extend();
  return cache_[n - 1];
}

void APIndex::extend() {
  const auto& config = sieve_->config();
  if (scanned_to_ > config.height_ceiling) {
    throw ResourceError("height ceiling " + std::to_string(config.height_ceiling) +
                        " exceeded while indexing primes = " + std::to_string(a_) + " mod " +
                        std::to_string(q_));
  }
  const std::uint64_t room = config.height_ceiling + 1 - scanned_to_;
  const std::uint64_t hi = scanned_to_ + std::min(room, config.segment_width);
  sieve_->segment(scanned_to_, hi).for_each_prime([&](std::uint64_t p) {
    if (p % q_ == a_) cache_.push_back(p);
    return true;
  });
  scanned_to_ = hi;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t y) {
  return SegmentedSieve(SieveConfig::from_environment()).primes_up_to(y);
}

std::uint64_t count_ap_primes(const SegmentedSieve& sieve, std::uint64_t q, std::int64_t a,
                              std::uint64_t y) {
  const std::uint64_t r = normalize_residue(q, a);
  if (y < 2) return 0;
  if (y > sieve.config().height_ceiling) {
    throw ResourceError("height ceiling " + std::to_string(sieve.config().height_ceiling) + " exceeded");
  }
  std::uint64_t count = 0;
  sieve.for_each_prime(2, y + 1, [&](std::uint64_t p) {
    if (p % q == r) ++count;
    return true;
  });
  return count;
}

void write_segments(std::ostream& out, std::span<const SieveSegment> segments) {
  out.write(kCacheMagic.data(), kCacheMagic.size());
  put_u64(out, segments.size());
  for (const auto& s : segments) {
    put_u64(out, s.lo());
    put_u64(out, s.hi());
    put_u64(out, s.words().size());
    for (std::uint64_t w : s.words()) put_u64(out, w);
  }
  if (!out) throw IoError("sieve cache: write failed");
}

std::vector<SieveSegment> read_segments(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kCacheMagic) {
    throw IoError("sieve cache: bad magic");
  }
  const std::uint64_t count = get_u64(in);
  std::vector<SieveSegment> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t lo = get_u64(in);
    const std::uint64_t hi = get_u64(in);
    const std::uint64_t n = get_u64(in);
    if (lo < 2 || hi <= lo || n != word_count(hi - lo)) throw IoError("sieve cache: malformed segment header");
    std::vector<std::uint64_t> words(static_cast<std::size_t>(n));
    for (auto& w : words) w = get_u64(in);
    out.emplace_back(lo, hi, std::move(words));
  }
  return out;
}

void write_sieve_cache(const SegmentedSieve& sieve, std::uint64_t height,
                       const std::filesystem::path& path) {
  if (height < 2) throw DomainError("sieve cache height must be >= 2");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::uint64_t width = sieve.config().segment_width;
  const std::uint64_t end = height + 1;
  out.write(kCacheMagic.data(), kCacheMagic.size());
  put_u64(out, (end - 2 + width - 1) / width);
  for (std::uint64_t lo = 2; lo < end; lo = std::min(end, lo + width)) {
    const SieveSegment s = sieve.segment(lo, std::min(end, lo + width));
    put_u64(out, s.lo());
    put_u64(out, s.hi());
    put_u64(out, s.words().size());
    for (std::uint64_t w : s.words()) put_u64(out, w);
  }
  if (!out) throw IoError("sieve cache: write failed for " + path.string());
}

std::vector<SieveSegment> read_sieve_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_segments(in);
}

}  // namespace shiu
