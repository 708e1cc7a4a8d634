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

#include "shiu/tuples.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "shiu/errors.hpp"
#include "shiu/primality.hpp"

namespace shiu {
namespace {

constexpr std::uint64_t kMaxMaterializedResidues = std::uint64_t{1} << 24;
constexpr std::uint64_t kTrialDivisionBound = 1 << 16;

bool is_degenerate(const LinearForm& f, std::uint64_t p) {
  return mpz_divisible_ui_p(f.g.get_mpz_t(), p) && mpz_divisible_ui_p(f.h.get_mpz_t(), p);
}

// Root of g*n + h mod p for p not dividing g.
std::uint64_t root_mod(const LinearForm& f, std::uint64_t p) {
  const std::uint64_t g = mod_floor(f.g, p);
  const std::uint64_t h = mod_floor(f.h, p);
  const auto inv = inverse_mod(g, p);
  if (!inv) throw InternalError("root_mod called with p | g");
  return mul_mod((p - h) % p, *inv, p);
}

void require_prime(std::uint64_t p) {
  if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
}

BigInt pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 64; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto step = [&](const BigInt& v) { return BigInt((v * v + c) % n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = q * abs(x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    } while (g == 1 && r < (1ul << 24));
    if (g == n) {
      do {
        ys = step(ys);
        BigInt diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  throw ResourceError("could not factor " + to_decimal(n));
}

void collect_prime_factors(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (primality(n) != Certainty::Composite) {
    out.push_back(n);
    return;
  }
  const BigInt d = pollard_brent(n);
  collect_prime_factors(d, out);
  collect_prime_factors(BigInt(n / d), out);
}

std::string form_text(const LinearForm& f) {
  std::string out = to_decimal(f.g) + "*x";
  if (sgn(f.h) < 0) {
    out += "-" + to_decimal(BigInt(-f.h));
  } else {
    out += "+" + to_decimal(f.h);
  }
  return out;
}

BigInt json_integer(const nlohmann::ordered_json& v) {
  if (v.is_string()) {
    if (auto parsed = parse_decimal(v.get<std::string>())) return *parsed;
  } else if (v.is_number_unsigned()) {
    return from_u64(v.get<std::uint64_t>());
  } else if (v.is_number_integer()) {
    return BigInt(static_cast<long>(v.get<std::int64_t>()));
  }
  throw DomainError("expected a decimal integer, got " + v.dump());
}

}  // namespace

KTuple::KTuple(std::vector<LinearForm> forms) : forms_(std::move(forms)) {
  if (forms_.empty()) throw DomainError("a k-tuple needs at least one form");
  for (const auto& f : forms_) {
    if (f.g < 1) throw DomainError("form coefficient must be >= 1, got " + to_decimal(f.g));
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& f : forms_) {
    if (!seen.emplace(to_decimal(f.g), to_decimal(f.h)).second) {
      throw DomainError("duplicate form " + form_text(f));
    }
  }
}

std::vector<std::uint64_t> residue_coverage(const KTuple& tuple, std::uint64_t p) {
  require_prime(p);
  std::vector<std::uint64_t> roots;
  for (const auto& f : tuple.forms()) {
    if (!mpz_divisible_ui_p(f.g.get_mpz_t(), p)) {
      roots.push_back(root_mod(f, p));
    } else if (mpz_divisible_ui_p(f.h.get_mpz_t(), p)) {
      if (p > kMaxMaterializedResidues) {
        throw ResourceError("coverage of every residue mod " + std::to_string(p) + " is too large to list");
      }
      roots.resize(p);
      for (std::uint64_t n = 0; n < p; ++n) roots[n] = n;
      return roots;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::uint64_t coverage_count(const KTuple& tuple, std::uint64_t p) {
  require_prime(p);
  for (const auto& f : tuple.forms()) {
    if (is_degenerate(f, p)) return p;
  }
  std::vector<std::uint64_t> roots;
  for (const auto& f : tuple.forms()) {
    if (!mpz_divisible_ui_p(f.g.get_mpz_t(), p)) roots.push_back(root_mod(f, p));
  }
  std::sort(roots.begin(), roots.end());
  return static_cast<std::uint64_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

BigInt smallest_prime_factor(const BigInt& n) {
  if (n < 2) throw DomainError("smallest_prime_factor needs n >= 2");
  for (unsigned long d = 2; d < kTrialDivisionBound; ++d) {
    if (d * d > n) return n;
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) return d;
  }
  std::vector<BigInt> factors;
  collect_prime_factors(n, factors);
  return *std::min_element(factors.begin(), factors.end());
}

AdmissibilityReport is_admissible(const KTuple& tuple) {
  std::set<std::uint64_t> check;
  const std::uint64_t k = tuple.size();
  for (std::uint64_t p = 2; p <= k; ++p) {
    if (is_prime_u64(p)) check.insert(p);
  }
  for (const auto& f : tuple.forms()) {
    BigInt d;
    mpz_gcd(d.get_mpz_t(), f.g.get_mpz_t(), f.h.get_mpz_t());
    if (d > 1) {
      const BigInt p = smallest_prime_factor(d);
      if (!fits_u64(p)) throw RangeError("fixed prime divisor " + to_decimal(p) + " exceeds 64 bits");
      check.insert(to_u64(p));
    }
  }

  AdmissibilityReport report;
  for (std::uint64_t p : check) {
    report.checked_primes.push_back(p);
    const std::uint64_t covered = coverage_count(tuple, p);
    if (covered == p) {
      report.admissible = false;
      report.witness = CoverageWitness{p, covered};
      break;
    }
  }
  return report;
}

std::string to_text(const KTuple& tuple) {
  std::string out;
  for (const auto& f : tuple.forms()) out += form_text(f) + "\n";
  return out;
}

KTuple parse_tuple_text(std::string_view text) {
  std::vector<LinearForm> forms;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fail = [&](const char* why) {
      return DomainError("tuple line " + std::to_string(line_no) + ": " + why + ": '" + std::string(line) + "'");
    };
    const std::size_t star = line.find("*x");
    if (star == std::string_view::npos || star + 2 >= line.size()) throw fail("expected g*x+h or g*x-h");
    const char sign = line[star + 2];
    if (sign != '+' && sign != '-') throw fail("expected '+' or '-' after x");
    const std::string_view g_text = line.substr(0, star);
    const std::string_view h_text = line.substr(star + 3);
    if (g_text.starts_with('-') || h_text.starts_with('-')) throw fail("unexpected sign");
    auto has_leading_zero = [](std::string_view d) { return d.size() > 1 && d.front() == '0'; };
    if (has_leading_zero(g_text) || has_leading_zero(h_text)) throw fail("leading zero");
    if (sign == '-' && h_text == "0") throw fail("negative zero");
    auto g = parse_decimal(g_text);
    auto h = parse_decimal(h_text);
    if (!g || !h) throw fail("malformed integer");
    forms.push_back({*g, sign == '-' ? BigInt(-*h) : *h});
  }
  return KTuple(std::move(forms));
}

nlohmann::ordered_json to_json(const KTuple& tuple) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& f : tuple.forms()) out.push_back({to_decimal(f.g), to_decimal(f.h)});
  return out;
}

KTuple tuple_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw DomainError("tuple JSON must be an array of [g, h] pairs");
  std::vector<LinearForm> forms;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw DomainError("tuple JSON entry must be [g, h]");
    forms.push_back({json_integer(pair[0]), json_integer(pair[1])});
  }
  return KTuple(std::move(forms));
}

nlohmann::ordered_json to_json(const AdmissibilityReport& report) {
  nlohmann::ordered_json out;
  out["admissible"] = report.admissible;
  if (report.witness) {
    out["witness"] = {{"prime", report.witness->prime}, {"covered", report.witness->covered}};
  } else {
    out["witness"] = nullptr;
  }
  out["checked_primes"] = report.checked_primes;
  return out;
}

}  // namespace shiu
