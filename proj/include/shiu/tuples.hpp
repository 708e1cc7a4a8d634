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
#include <vector>

#include <json.hpp>

#include "shiu/arith.hpp"

namespace shiu {

/// g*x + h with g >= 1.
struct LinearForm {
  BigInt g;
  BigInt h;

  friend bool operator==(const LinearForm& x, const LinearForm& y) { return x.g == y.g && x.h == y.h; }
};

/// A nonempty list of pairwise distinct linear forms.
class KTuple {
 public:
  explicit KTuple(std::vector<LinearForm> forms);

  std::size_t size() const { return forms_.size(); }
  const std::vector<LinearForm>& forms() const { return forms_; }

  friend bool operator==(const KTuple&, const KTuple&) = default;

 private:
  std::vector<LinearForm> forms_;
};

struct CoverageWitness {
  std::uint64_t prime;
  std::uint64_t covered;  // equals prime: every residue is a root
};

struct AdmissibilityReport {
  bool admissible = true;
  std::optional<CoverageWitness> witness;
  std::vector<std::uint64_t> checked_primes;  // ascending
};

/// Sorted residues n mod p with prod(g_i n + h_i) = 0 (mod p). Throws
/// DomainError if p is not prime, and ResourceError if a degenerate form
/// would require materializing more than 2^24 residues.
std::vector<std::uint64_t> residue_coverage(const KTuple& tuple, std::uint64_t p);

/// Same set, counted without materializing it.
std::uint64_t coverage_count(const KTuple& tuple, std::uint64_t p);

/// Decides admissibility exactly. Only primes p <= k can be fully covered by
/// nondegenerate forms, and a form with p | g and p | h covers everything, so
/// the checked set is the primes up to k plus the prime factors of each
/// gcd(g_i, h_i). Stops at the first fully covered prime.
AdmissibilityReport is_admissible(const KTuple& tuple);

/// Smallest prime factor of n >= 2, by trial division and Pollard-Brent.
BigInt smallest_prime_factor(const BigInt& n);

// One form per line, "g*x+h" or "g*x-h", each line '\n'-terminated.
std::string to_text(const KTuple& tuple);
KTuple parse_tuple_text(std::string_view text);

// [[g, h], ...] with decimal-string integers.
nlohmann::ordered_json to_json(const KTuple& tuple);
KTuple tuple_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const AdmissibilityReport& report);

}  // namespace shiu
