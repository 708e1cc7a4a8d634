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
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace shiu {

using BigInt = mpz_class;

using u128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Signed residue reduced into [0, m).
std::uint64_t mod_floor(std::int64_t value, std::uint64_t m);
std::uint64_t mod_floor(const BigInt& value, std::uint64_t m);

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm; nullopt
/// when gcd(a, m) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

/// floor(sqrt(n)), exact for all 64-bit n.
std::uint64_t isqrt(std::uint64_t n);

std::string to_decimal(const BigInt& value);

/// Parses an optionally signed decimal integer. Rejects empty input, leading
/// '+', embedded whitespace and non-digits.
std::optional<BigInt> parse_decimal(std::string_view text);

inline bool fits_u64(const BigInt& value) {
  return sgn(value) >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& value);
BigInt from_u64(std::uint64_t value);

}  // namespace shiu
