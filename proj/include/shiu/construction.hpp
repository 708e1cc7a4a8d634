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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "shiu/arith.hpp"
#include "shiu/prime_engine.hpp"
#include "shiu/primality.hpp"
#include "shiu/tuples.hpp"

namespace shiu {

struct ConstructionParams {
  std::uint64_t q = 0;
  std::uint64_t a = 0;  // reduced into [0, q)
  std::uint64_t k = 0;
  std::optional<std::uint64_t> m;  // carried as metadata only

  /// Validates q >= 3, gcd(a, q) = 1, k >= 2 and reduces a.
  static ConstructionParams make(std::uint64_t q, std::int64_t a, std::uint64_t k,
                                 std::optional<std::uint64_t> m = std::nullopt);

  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

struct ConstructionOptions {
  std::uint64_t t_cap = 1'000'000;
};

/// The tuple H = {g*q*x + l_{t+1}, ..., g*q*x + l_{t+k}}, with g kept in
/// factored form: the primes up to l_{t+k} that are not offsets.
struct Construction {
  ConstructionParams params;
  std::uint64_t t = 0;
  std::vector<std::uint64_t> offsets;    // l_{t+1} < ... < l_{t+k}
  std::vector<std::uint64_t> g_factors;  // ascending
  std::uint64_t B = 0;                   // l_{t+k} - l_{t+1}

  BigInt g() const;
  /// g * q, the shared coefficient of every form.
  BigInt coefficient() const;

  friend bool operator==(const Construction&, const Construction&) = default;
};

/// True iff k < l_{t+1} and l_{t+k} < l_{t+1}^2.
bool t_qualifies(APIndex& idx, std::uint64_t k, std::uint64_t t);

/// Minimal t >= 0 satisfying t_qualifies. Throws ResourceError past t_cap.
std::uint64_t choose_t(APIndex& idx, std::uint64_t k, std::uint64_t t_cap = ConstructionOptions{}.t_cap);

Construction build(const ConstructionParams& params, APIndex& idx, const ConstructionOptions& options = {});
Construction build(const ConstructionParams& params, std::shared_ptr<const SegmentedSieve> sieve,
                   const ConstructionOptions& options = {});

KTuple as_ktuple(const Construction& c);

/// Runs the construction-specific argument (primes dividing g*q miss every
/// offset; small primes see fewer than p offset residues) and the general
/// checker on as_ktuple(c). Returns the general report; throws InternalError
/// if the two disagree.
AdmissibilityReport verify_admissible(const Construction& c);

struct BlockedValue {
  std::uint64_t h;
  std::uint64_t blocking_prime;  // divides both h and g*q

  friend bool operator==(const BlockedValue&, const BlockedValue&) = default;
};

/// One entry per integer h in [l_{t+1}, l_{t+k}] that is not an offset,
/// carrying the smallest prime factor of h that divides g*q.
std::vector<BlockedValue> verify_isolation(const Construction& c);

struct WindowReport {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> prime_offsets;  // offsets h with g*q*n + h prime
  std::uint64_t window_prime_count = 0;      // primes anywhere in the window
  bool degenerate = false;                   // n == 0
  bool congruence_ok = true;
  bool isolation_ok = true;  // every prime in the window sits at an offset
  bool probable = false;     // some reported prime is only a probable prime
};

/// Exhaustively primality-tests every integer in each window
/// [g*q*n + l_{t+1}, g*q*n + l_{t+k}] for n in [n_lo, n_hi]. Work is split
/// over `threads` workers; output is in n order regardless.
std::vector<WindowReport> scan_windows(const Construction& c, std::uint64_t n_lo, std::uint64_t n_hi,
                                       unsigned threads = 1);

// Certificate JSON: {q, a, k, [m], t, offsets, g_factors, B, [g_decimal]}.
nlohmann::ordered_json certificate_json(const Construction& c, bool include_g = false);
std::string certificate_text(const Construction& c, bool include_g = false);

/// Parses a certificate and checks it is internally consistent without any
/// sieve: offsets are consecutive AP primes, g_factors complement them, B
/// matches. Throws DomainError describing the first defect.
Construction certificate_from_json(const nlohmann::ordered_json& j);

struct CertificateCheck {
  bool fields_match = false;
  bool byte_exact = false;  // canonical re-serialization equals the input text
  std::vector<std::string> mismatches;
  std::optional<Construction> rederived;
};

/// Re-derives the construction from (q, a, k) and compares every field.
CertificateCheck verify_certificate(std::string_view text, std::shared_ptr<const SegmentedSieve> sieve,
                                    const ConstructionOptions& options = {});

nlohmann::ordered_json to_json(const WindowReport& report);
nlohmann::ordered_json to_json(const std::vector<BlockedValue>& blocked);

/// Plain-text walkthrough of a construction with every intermediate value.
std::string walkthrough(const Construction& c);

}  // namespace shiu
