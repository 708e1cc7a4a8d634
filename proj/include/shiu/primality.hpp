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

#include <array>
#include <cstdint>

#include "shiu/arith.hpp"

namespace shiu {

/// Deterministic Miller-Rabin for the full 64-bit range. The bases are the
/// first twelve primes, which are exact below 3.3e24.
bool is_prime_u64(std::uint64_t n);

enum class Certainty {
  Composite,
  Prime,          // proven (value fits in 64 bits)
  ProbablePrime,  // passed the strong-probable-prime battery
};

const char* to_string(Certainty c) noexcept;

/// Witness bases used for values above 64 bits: the first twenty primes.
inline constexpr std::array<unsigned, 20> kSprpWitnesses = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

/// Values wider than this throw RangeError.
inline constexpr std::size_t kMaxPrimalityBits = 1u << 16;

/// Deterministic for values that fit in 64 bits, a strong-probable-prime
/// battery over kSprpWitnesses above that. Negative values, 0 and 1 are
/// composite for our purposes.
Certainty primality(const BigInt& n);

}  // namespace shiu
