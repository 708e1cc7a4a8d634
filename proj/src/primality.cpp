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

#include "shiu/primality.hpp"

#include "shiu/errors.hpp"

namespace shiu {
namespace {

constexpr std::array<std::uint64_t, 12> kDeterministicBases = {2,  3,  5,  7,  11, 13,
                                                               17, 19, 23, 29, 31, 37};

bool strong_probable_prime_u64(std::uint64_t n, std::uint64_t d, unsigned s, std::uint64_t base) {
  std::uint64_t x = pow_mod(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const BigInt& n, const BigInt& d, unsigned long s, unsigned base) {
  const BigInt n_minus_1 = n - 1;
  BigInt x;
  BigInt b = base;
  mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

}  // namespace

const char* to_string(Certainty c) noexcept {
  switch (c) {
    case Certainty::Composite: return "composite";
    case Certainty::Prime: return "prime";
    case Certainty::ProbablePrime: return "probable_prime";
  }
  return "?";
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : kDeterministicBases) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t base : kDeterministicBases) {
    if (!strong_probable_prime_u64(n, d, s, base)) return false;
  }
  return true;
}

Certainty primality(const BigInt& n) {
  if (sgn(n) <= 0) return Certainty::Composite;
  if (fits_u64(n)) return is_prime_u64(to_u64(n)) ? Certainty::Prime : Certainty::Composite;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > kMaxPrimalityBits) {
    throw RangeError("value exceeds primality-testing range of " +
                     std::to_string(kMaxPrimalityBits) + " bits");
  }
  // n > 2^64 here, so any small divisor proves compositeness.
  for (unsigned p : kSprpWitnesses) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Certainty::Composite;
  }
  BigInt d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned base : kSprpWitnesses) {
    if (!strong_probable_prime(n, d, s, base)) return Certainty::Composite;
  }
  return Certainty::ProbablePrime;
}

}  // namespace shiu
