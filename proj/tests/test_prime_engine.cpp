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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shiu/errors.hpp"
#include "shiu/primality.hpp"
#include "shiu/prime_engine.hpp"

using namespace shiu;

namespace {

std::shared_ptr<const SegmentedSieve> make_sieve(std::uint64_t width = 1 << 16) {
  SieveConfig config;
  config.segment_width = width;
  return std::make_shared<SegmentedSieve>(config);
}

}  // namespace

TEST_CASE("primes_up_to small cases") {
  const auto sieve = make_sieve();
  CHECK(sieve->primes_up_to(0).empty());
  CHECK(sieve->primes_up_to(1).empty());
  CHECK(sieve->primes_up_to(2) == std::vector<std::uint64_t>{2});
  CHECK(sieve->primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
}

TEST_CASE("primes_up_to(10^6) matches trial division") {
  const auto expected = oracle::primes_up_to(1'000'000);
  REQUIRE(expected.size() == 78498);
  CHECK(make_sieve()->primes_up_to(1'000'000) == expected);
}

TEST_CASE("results do not depend on segment width") {
  const auto reference = oracle::primes_up_to(300'000);
  for (std::uint64_t width : {std::uint64_t{1} << 10, std::uint64_t{1} << 16, std::uint64_t{1} << 20}) {
    CAPTURE(width);
    const auto sieve = make_sieve(width);
    CHECK(sieve->primes_up_to(300'000) == reference);
    APIndex idx(sieve, 7, 3);
    CHECK(idx.nth(500) == oracle::ap_primes(7, 3, 500).back());
  }
}

TEST_CASE("segments agree with trial division at odd offsets") {
  const auto sieve = make_sieve(1000);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t lo = 2 + rng() % 900'000;
    const std::uint64_t hi = lo + 1 + rng() % 5000;
    const SieveSegment seg = sieve->segment(lo, hi);
    for (std::uint64_t n = lo; n < hi; ++n) REQUIRE(seg.is_prime(n) == oracle::is_prime(n));
  }
}

TEST_CASE("nth_ap_prime examples") {
  const auto sieve = make_sieve();
  APIndex mod3_1(sieve, 3, 1);
  CHECK(nth_ap_prime(mod3_1, 1) == 7);
  CHECK(nth_ap_prime(mod3_1, 4) == 31);
  APIndex mod3_2(sieve, 3, 2);
  CHECK(nth_ap_prime(mod3_2, 1) == 2);
  APIndex negative(sieve, 3, -1);
  CHECK(negative.a() == 2);
  CHECK_THROWS_AS(nth_ap_prime(mod3_1, 0), DomainError);
}

TEST_CASE("APIndex rejects bad parameters") {
  const auto sieve = make_sieve();
  CHECK_THROWS_WITH_AS(APIndex(sieve, 4, 2), "gcd(a,q) != 1", DomainError);
  CHECK_THROWS_AS(APIndex(sieve, 2, 1), DomainError);
  CHECK_THROWS_AS(APIndex(sieve, 6, 0), DomainError);
}

TEST_CASE("count_ap_primes examples") {
  const auto sieve = make_sieve();
  CHECK(count_ap_primes(*sieve, 3, 1, 20) == 3);
  CHECK(count_ap_primes(*sieve, 3, 1, 6) == 0);
  CHECK(count_ap_primes(*sieve, 4, 1, 10) == 1);
  CHECK(count_ap_primes(*sieve, 4, 1, 0) == 0);
}

TEST_CASE("AP index properties over a grid") {
  const auto sieve = make_sieve();
  for (std::uint64_t q : {3, 4, 5, 7, 10, 12, 30}) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      CAPTURE(q);
      CAPTURE(a);
      APIndex idx(sieve, q, static_cast<std::int64_t>(a));
      const auto expected = oracle::ap_primes(q, a, 101);
      for (std::uint64_t n = 1; n <= 100; ++n) {
        const std::uint64_t cur = idx.nth(n);
        const std::uint64_t next = idx.nth(n + 1);
        REQUIRE(cur == expected[n - 1]);
        REQUIRE(next - cur >= q);
        REQUIRE((next - cur) % q == 0);
        REQUIRE(next > q * n);
      }
      for (std::uint64_t n : {1, 10, 57}) CHECK(count_ap_primes(*sieve, q, a, idx.nth(n)) == n);
    }
  }
}

TEST_CASE("height ceiling and budget become resource errors") {
  SieveConfig config;
  config.height_ceiling = 1000;
  config.segment_width = 64;
  const auto sieve = std::make_shared<SegmentedSieve>(config);
  CHECK_THROWS_AS(sieve->primes_up_to(5000), ResourceError);
  APIndex idx(sieve, 1009, 1);  // first prime = 1 mod 1009 is 2019 > ceiling
  CHECK_THROWS_AS(idx.nth(1), ResourceError);

  SieveConfig tight;
  tight.budget_bytes = 4096;
  tight.segment_width = 1024;
  CHECK_THROWS_AS(SegmentedSieve(tight).primes_up_to(1'000'000), ResourceError);
  tight.segment_width = 1 << 20;
  CHECK_THROWS_AS(SegmentedSieve{tight}, ResourceError);
}

TEST_CASE("budget can come from the environment") {
  setenv("SHIU_SIEVE_BUDGET_MB", "3", 1);
  CHECK(SieveConfig::from_environment().budget_bytes == 3u << 20);
  setenv("SHIU_SIEVE_BUDGET_MB", "lots", 1);
  CHECK_THROWS_AS(SieveConfig::from_environment(), DomainError);
  unsetenv("SHIU_SIEVE_BUDGET_MB");
}

TEST_CASE("deterministic Miller-Rabin") {
  for (std::uint64_t n = 0; n < 20000; ++n) REQUIRE(is_prime_u64(n) == oracle::is_prime(n));
  // Strong pseudoprimes to several small bases.
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK_FALSE(is_prime_u64(3825123056546413051ULL));
  CHECK(is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
  CHECK_FALSE(is_prime_u64(18446744073709551615ULL));
}

TEST_CASE("big primality reports probable primes above 64 bits") {
  const BigInt m61 = (BigInt(1) << 61) - 1;
  CHECK(primality(m61) == Certainty::Prime);
  const BigInt m89 = (BigInt(1) << 89) - 1;
  CHECK(primality(m89) == Certainty::ProbablePrime);
  CHECK(primality(m89 * m61) == Certainty::Composite);
  CHECK(primality(BigInt(-7)) == Certainty::Composite);
  CHECK_THROWS_AS(primality(BigInt(1) << (kMaxPrimalityBits + 1)), RangeError);
}

TEST_CASE("sieve cache round trip and reuse") {
  const auto sieve = make_sieve(1 << 12);
  const auto path = std::filesystem::temp_directory_path() / "shiu_test_cache.bin";
  write_sieve_cache(*sieve, 100'000, path);
  const auto segments = read_sieve_cache(path);
  REQUIRE(!segments.empty());
  CHECK(segments.front().lo() == 2);
  CHECK(segments.back().hi() == 100'001);

  std::stringstream buffer;
  write_segments(buffer, segments);
  CHECK(read_segments(buffer) == segments);

  SegmentedSieve cached(SieveConfig{});
  cached.adopt_cache(segments);
  CHECK(cached.cached_height() == 100'001);
  CHECK(cached.primes_up_to(100'000) == sieve->primes_up_to(100'000));
  CHECK(cached.segment(99'000, 100'001) == sieve->segment(99'000, 100'001));
  CHECK(cached.primes_up_to(200'000) == sieve->primes_up_to(200'000));

  std::stringstream junk("not a cache");
  CHECK_THROWS_AS(read_segments(junk), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("corrupted cache is rejected") {
  const auto sieve = make_sieve(1 << 12);
  std::vector<SieveSegment> segments{sieve->segment(2, 5000)};
  std::vector<std::uint64_t> words(segments[0].words().begin(), segments[0].words().end());
  words[0] ^= 1ULL << 5;  // flip 7
  std::vector<SieveSegment> bad{SieveSegment(2, 5000, words)};
  SegmentedSieve target(SieveConfig{});
  CHECK_THROWS_AS(target.adopt_cache(bad), IoError);
}
