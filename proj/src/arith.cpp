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

#include "shiu/arith.hpp"

#include <cmath>

#include "shiu/errors.hpp"

namespace shiu {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::uint64_t mod_floor(std::int64_t value, std::uint64_t m) {
  if (value >= 0) return static_cast<std::uint64_t>(value) % m;
  // -(value + 1) avoids overflow at INT64_MIN
  std::uint64_t neg = static_cast<std::uint64_t>(-(value + 1)) % m;
  return (m - 1 - neg) % m;
}

std::uint64_t mod_floor(const BigInt& value, std::uint64_t m) {
  BigInt r;
  BigInt mm = from_u64(m);
  mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), mm.get_mpz_t());
  return to_u64(r);
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 0) return std::nullopt;
  if (m == 1) return 0;
  // Track Bezout coefficients of a in signed 128-bit to stay exact for any
  // 64-bit modulus.
  __int128 old_r = a % m, r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 quotient = old_r / r;
    __int128 tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  __int128 mm = m;
  __int128 inv = old_s % mm;
  if (inv < 0) inv += mm;
  return static_cast<std::uint64_t>(inv);
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

std::optional<BigInt> parse_decimal(std::string_view text) {
  std::size_t i = 0;
  if (!text.empty() && text[0] == '-') i = 1;
  if (i == text.size()) return std::nullopt;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') return std::nullopt;
  }
  BigInt out;
  if (out.set_str(std::string(text), 10) != 0) return std::nullopt;
  return out;
}

std::uint64_t to_u64(const BigInt& value) {
  if (!fits_u64(value)) {
    throw RangeError("integer does not fit in 64 bits: " + to_decimal(value));
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

BigInt from_u64(std::uint64_t value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
  return out;
}

}  // namespace shiu
