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

#include "shiu/construction.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "shiu/errors.hpp"

namespace shiu {
namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kMaxCertificateHeight = std::uint64_t{1} << 32;

std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<char> local_sieve(std::uint64_t limit) {
  if (limit > kMaxCertificateHeight) {
    throw ResourceError("certificate height " + std::to_string(limit) + " too large to check locally");
  }
  std::vector<char> prime(limit + 1, 1);
  prime[0] = 0;
  if (limit >= 1) prime[1] = 0;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!prime[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) prime[j] = 0;
  }
  return prime;
}

std::uint64_t json_u64(const json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("certificate is missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    if (auto parsed = parse_decimal(v.get<std::string>()); parsed && fits_u64(*parsed)) return to_u64(*parsed);
  }
  throw DomainError(std::string("certificate field '") + key + "' must be a nonnegative integer");
}

std::vector<std::uint64_t> json_u64_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw DomainError(std::string("certificate field '") + key + "' must be an array");
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < j.at(key).size(); ++i) {
    json wrapper;
    wrapper["v"] = j.at(key)[i];
    out.push_back(json_u64(wrapper, "v"));
  }
  return out;
}

std::string join(const std::vector<std::uint64_t>& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

std::vector<WindowReport> scan_range(const Construction& c, const BigInt& coefficient, std::uint64_t n_lo,
                                     std::uint64_t n_hi) {
  std::vector<WindowReport> out;
  const std::uint64_t first = c.offsets.front();
  const std::uint64_t last = c.offsets.back();
  for (std::uint64_t n = n_lo;; ++n) {
    WindowReport report;
    report.n = n;
    report.degenerate = n == 0;
    const BigInt base = coefficient * from_u64(n);
    std::size_t next_offset = 0;
    for (std::uint64_t h = first; h <= last; ++h) {
      const bool at_offset = next_offset < c.offsets.size() && c.offsets[next_offset] == h;
      if (at_offset) ++next_offset;
      const BigInt value = base + from_u64(h);
      const Certainty verdict = primality(value);
      if (verdict == Certainty::Composite) continue;
      ++report.window_prime_count;
      if (verdict == Certainty::ProbablePrime) report.probable = true;
      if (mod_floor(value, c.params.q) != c.params.a) report.congruence_ok = false;
      if (at_offset) {
        report.prime_offsets.push_back(h);
      } else {
        report.isolation_ok = false;
      }
    }
    out.push_back(std::move(report));
    if (n == n_hi) break;
  }
  return out;
}

}  // namespace

ConstructionParams ConstructionParams::make(std::uint64_t q, std::int64_t a, std::uint64_t k,
                                            std::optional<std::uint64_t> m) {
  ConstructionParams p;
  p.q = q;
  p.a = normalize_residue(q, a);
  if (k < 2) throw DomainError("k must be >= 2");
  if (m && *m < 2) throw DomainError("m must be >= 2");
  p.k = k;
  p.m = m;
  return p;
}

BigInt Construction::g() const {
  BigInt out = 1;
  for (std::uint64_t p : g_factors) out *= from_u64(p);
  return out;
}

BigInt Construction::coefficient() const { return g() * from_u64(params.q); }

bool t_qualifies(APIndex& idx, std::uint64_t k, std::uint64_t t) {
  const std::uint64_t first = idx.nth(t + 1);
  if (first <= k) return false;
  const std::uint64_t last = idx.nth(t + k);
  return static_cast<u128>(last) < static_cast<u128>(first) * first;
}

std::uint64_t choose_t(APIndex& idx, std::uint64_t k, std::uint64_t t_cap) {
  if (k < 2) throw DomainError("k must be >= 2");
  for (std::uint64_t t = 0; t <= t_cap; ++t) {
    if (t_qualifies(idx, k, t)) return t;
  }
  throw ResourceError("no admissible shift t <= " + std::to_string(t_cap) + " for q=" + std::to_string(idx.q()) +
                      " a=" + std::to_string(idx.a()) + " k=" + std::to_string(k));
}

Construction build(const ConstructionParams& params, APIndex& idx, const ConstructionOptions& options) {
  if (idx.q() != params.q || idx.a() != params.a) throw DomainError("APIndex does not match parameters");
  Construction c;
  c.params = params;
  c.t = choose_t(idx, params.k, options.t_cap);
  for (std::uint64_t i = 1; i <= params.k; ++i) c.offsets.push_back(idx.nth(c.t + i));
  const auto primes = idx.sieve().primes_up_to(c.offsets.back());
  std::set_difference(primes.begin(), primes.end(), c.offsets.begin(), c.offsets.end(),
                      std::back_inserter(c.g_factors));
  c.B = c.offsets.back() - c.offsets.front();
  return c;
}

Construction build(const ConstructionParams& params, std::shared_ptr<const SegmentedSieve> sieve,
                   const ConstructionOptions& options) {
  APIndex idx(std::move(sieve), params.q, static_cast<std::int64_t>(params.a));
  return build(params, idx, options);
}

KTuple as_ktuple(const Construction& c) {
  const BigInt coefficient = c.coefficient();
  std::vector<LinearForm> forms;
  forms.reserve(c.offsets.size());
  for (std::uint64_t h : c.offsets) forms.push_back({coefficient, from_u64(h)});
  return KTuple(std::move(forms));
}

AdmissibilityReport verify_admissible(const Construction& c) {
  // Primes dividing g*q: the g factors and the prime divisors of q.
  std::vector<std::uint64_t> divisors_gq = c.g_factors;
  for (std::uint64_t p : prime_factors_u64(c.params.q)) divisors_gq.push_back(p);
  std::sort(divisors_gq.begin(), divisors_gq.end());
  divisors_gq.erase(std::unique(divisors_gq.begin(), divisors_gq.end()), divisors_gq.end());

  bool specialized = true;
  for (std::uint64_t p : divisors_gq) {
    for (std::uint64_t h : c.offsets) {
      if (h % p == 0) specialized = false;
    }
  }
  for (std::uint64_t p = 2; p <= c.params.k; ++p) {
    if (!is_prime_u64(p) || std::binary_search(divisors_gq.begin(), divisors_gq.end(), p)) continue;
    std::vector<std::uint64_t> residues;
    for (std::uint64_t h : c.offsets) residues.push_back(h % p);
    std::sort(residues.begin(), residues.end());
    const auto distinct = std::unique(residues.begin(), residues.end()) - residues.begin();
    if (static_cast<std::uint64_t>(distinct) >= p) specialized = false;
  }

  AdmissibilityReport general = is_admissible(as_ktuple(c));
  if (general.admissible != specialized) {
    throw InternalError("admissibility checkers disagree for q=" + std::to_string(c.params.q) +
                        " a=" + std::to_string(c.params.a) + " k=" + std::to_string(c.params.k) +
                        " (construction-specific=" + (specialized ? "true" : "false") +
                        ", general=" + (general.admissible ? "true" : "false") + ")");
  }
  return general;
}

std::vector<BlockedValue> verify_isolation(const Construction& c) {
  std::vector<BlockedValue> out;
  const std::uint64_t first = c.offsets.front();
  const std::uint64_t last = c.offsets.back();
  for (std::uint64_t h = first; h <= last; ++h) {
    if (std::binary_search(c.offsets.begin(), c.offsets.end(), h)) continue;
    std::optional<std::uint64_t> blocking;
    for (std::uint64_t p : prime_factors_u64(h)) {
      if (std::binary_search(c.g_factors.begin(), c.g_factors.end(), p) || c.params.q % p == 0) {
        blocking = p;
        break;
      }
    }
    if (!blocking) {
      throw InternalError("no prime of g*q divides h=" + std::to_string(h) + " for q=" + std::to_string(c.params.q) +
                          " a=" + std::to_string(c.params.a) + " k=" + std::to_string(c.params.k));
    }
    out.push_back({h, *blocking});
  }
  return out;
}

std::vector<WindowReport> scan_windows(const Construction& c, std::uint64_t n_lo, std::uint64_t n_hi,
                                       unsigned threads) {
  if (n_lo > n_hi) throw DomainError("scan requires n_lo <= n_hi");
  if (c.offsets.empty()) throw DomainError("construction has no offsets");
  const BigInt coefficient = c.coefficient();
  const BigInt top = coefficient * from_u64(n_hi) + from_u64(c.offsets.back());
  if (mpz_sizeinbase(top.get_mpz_t(), 2) > kMaxPrimalityBits) {
    throw RangeError("window values reach " + std::to_string(mpz_sizeinbase(top.get_mpz_t(), 2)) +
                     " bits, beyond primality-testing range");
  }
  const std::uint64_t count = n_hi - n_lo + 1;
  const std::uint64_t workers = std::clamp<std::uint64_t>(threads, 1, count);
  if (workers == 1) return scan_range(c, coefficient, n_lo, n_hi);

  std::vector<std::future<std::vector<WindowReport>>> parts;
  const std::uint64_t chunk = count / workers;
  const std::uint64_t extra = count % workers;
  std::uint64_t lo = n_lo;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t len = chunk + (w < extra ? 1 : 0);
    const std::uint64_t hi = lo + len - 1;
    parts.push_back(std::async(std::launch::async, [&c, &coefficient, lo, hi] {
      return scan_range(c, coefficient, lo, hi);
    }));
    lo = hi + 1;
  }
  std::vector<WindowReport> out;
  out.reserve(count);
  for (auto& part : parts) {
    auto chunk_reports = part.get();
    std::move(chunk_reports.begin(), chunk_reports.end(), std::back_inserter(out));
  }
  return out;
}

json certificate_json(const Construction& c, bool include_g) {
  json out;
  out["q"] = c.params.q;
  out["a"] = c.params.a;
  out["k"] = c.params.k;
  if (c.params.m) out["m"] = *c.params.m;
  out["t"] = c.t;
  out["offsets"] = c.offsets;
  out["g_factors"] = c.g_factors;
  out["B"] = c.B;
  if (include_g) out["g_decimal"] = to_decimal(c.g());
  return out;
}

std::string certificate_text(const Construction& c, bool include_g) {
  return certificate_json(c, include_g).dump() + "\n";
}

Construction certificate_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("certificate must be a JSON object");
  std::optional<std::uint64_t> m;
  if (j.contains("m")) m = json_u64(j, "m");
  const std::uint64_t a = json_u64(j, "a");
  if (a > static_cast<std::uint64_t>(INT64_MAX)) throw DomainError("certificate field 'a' out of range");
  Construction c;
  c.params = ConstructionParams::make(json_u64(j, "q"), static_cast<std::int64_t>(a), json_u64(j, "k"), m);
  if (c.params.a != a) throw DomainError("certificate residue a is not reduced mod q");
  c.t = json_u64(j, "t");
  c.offsets = json_u64_list(j, "offsets");
  c.g_factors = json_u64_list(j, "g_factors");
  c.B = json_u64(j, "B");

  const auto& p = c.params;
  if (c.offsets.size() != p.k) throw DomainError("certificate has " + std::to_string(c.offsets.size()) + " offsets, expected k");
  if (!std::is_sorted(c.offsets.begin(), c.offsets.end()) ||
      std::adjacent_find(c.offsets.begin(), c.offsets.end()) != c.offsets.end()) {
    throw DomainError("certificate offsets are not strictly ascending");
  }
  const std::uint64_t first = c.offsets.front();
  const std::uint64_t last = c.offsets.back();
  if (first <= p.k) throw DomainError("certificate violates k < l_{t+1}");
  if (static_cast<u128>(last) >= static_cast<u128>(first) * first) {
    throw DomainError("certificate violates l_{t+k} < l_{t+1}^2");
  }
  if (c.B != last - first) throw DomainError("certificate B does not equal l_{t+k} - l_{t+1}");

  for (std::uint64_t h : c.offsets) {
    if (h % p.q != p.a) throw DomainError("certificate offset " + std::to_string(h) + " is not = a mod q");
  }
  const auto prime = local_sieve(last);
  // Exactly t AP primes below the first offset, none skipped between offsets.
  std::uint64_t below = 0;
  for (std::uint64_t v = p.a; v < first; v += p.q) below += prime[v];
  if (below != c.t) throw DomainError("certificate t does not index the first offset");
  std::size_t next = 0;
  for (std::uint64_t v = first; v <= last; v += p.q) {
    const bool is_offset = next < c.offsets.size() && c.offsets[next] == v;
    if (is_offset) ++next;
    if (is_offset != static_cast<bool>(prime[v])) {
      throw DomainError("certificate offsets are not consecutive primes = a mod q (at " + std::to_string(v) + ")");
    }
  }
  if (next != c.offsets.size()) throw DomainError("certificate offsets are not = a mod q");

  std::vector<std::uint64_t> expected_g;
  for (std::uint64_t v = 2; v <= last; ++v) {
    if (prime[v] && !std::binary_search(c.offsets.begin(), c.offsets.end(), v)) expected_g.push_back(v);
  }
  if (expected_g != c.g_factors) throw DomainError("certificate g_factors are not the primes <= l_{t+k} minus offsets");

  if (j.contains("g_decimal")) {
    const auto& gd = j.at("g_decimal");
    if (!gd.is_string() || gd.get<std::string>() != to_decimal(c.g())) {
      throw DomainError("certificate g_decimal does not equal the product of g_factors");
    }
  }
  return c;
}

CertificateCheck verify_certificate(std::string_view text, std::shared_ptr<const SegmentedSieve> sieve,
                                    const ConstructionOptions& options) {
  json input;
  try {
    input = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("certificate is not valid JSON: ") + e.what());
  }
  if (!input.is_object()) throw DomainError("certificate must be a JSON object");

  std::optional<std::uint64_t> m;
  if (input.contains("m")) m = json_u64(input, "m");
  const std::uint64_t a = json_u64(input, "a");
  if (a > static_cast<std::uint64_t>(INT64_MAX)) throw DomainError("certificate field 'a' out of range");
  const auto params = ConstructionParams::make(json_u64(input, "q"), static_cast<std::int64_t>(a),
                                               json_u64(input, "k"), m);

  CertificateCheck check;
  Construction rebuilt = build(params, std::move(sieve), options);
  const json expected = certificate_json(rebuilt, input.contains("g_decimal"));

  for (const auto& [key, value] : expected.items()) {
    if (!input.contains(key) || input.at(key) != value) check.mismatches.push_back(key);
  }
  for (const auto& [key, value] : input.items()) {
    if (!expected.contains(key)) check.mismatches.push_back(key + " (unexpected)");
  }
  check.fields_match = check.mismatches.empty();

  std::string_view trimmed = text;
  while (!trimmed.empty() && (trimmed.back() == '\n' || trimmed.back() == '\r')) trimmed.remove_suffix(1);
  check.byte_exact = trimmed == expected.dump();

  if (check.fields_match) {
    // Independent of the sieve: re-check the certificate's own content.
    const Construction parsed = certificate_from_json(input);
    if (!(parsed == rebuilt)) throw InternalError("certificate parse disagrees with re-derivation");
    verify_admissible(rebuilt);
    verify_isolation(rebuilt);
  }
  check.rederived = std::move(rebuilt);
  return check;
}

json to_json(const WindowReport& r) {
  json out;
  out["n"] = r.n;
  out["prime_offsets"] = r.prime_offsets;
  out["window_prime_count"] = r.window_prime_count;
  out["degenerate"] = r.degenerate;
  out["congruence_ok"] = r.congruence_ok;
  out["isolation_ok"] = r.isolation_ok;
  out["probable"] = r.probable;
  return out;
}

json to_json(const std::vector<BlockedValue>& blocked) {
  auto out = json::array();
  for (const auto& b : blocked) out.push_back({{"h", b.h}, {"blocking_prime", b.blocking_prime}});
  return out;
}

std::string walkthrough(const Construction& c) {
  const auto& p = c.params;
  std::ostringstream out;
  out << "Construction for q = " << p.q << ", a = " << p.a << ", k = " << p.k << "\n\n";
  out << "1. Primes = " << p.a << " (mod " << p.q << "), indexed from 1.\n";
  out << "   Shift t = " << c.t << " is the least t >= 0 with k < l_{t+1} and l_{t+k} < l_{t+1}^2:\n";
  out << "   l_{t+1} = " << c.offsets.front() << " > " << p.k << ", and l_{t+k} = " << c.offsets.back() << " < "
      << c.offsets.front() * c.offsets.front() << ".\n\n";
  out << "2. Offsets l_{t+1}..l_{t+k}: " << join(c.offsets) << "\n\n";
  out << "3. g = (product of primes <= " << c.offsets.back() << ") / (product of offsets)\n";
  out << "     = " << join(c.g_factors, " * ") << "\n";
  out << "     = " << to_decimal(c.g()) << "\n";
  out << "   Shared coefficient g*q = " << to_decimal(c.coefficient()) << "\n\n";
  out << "4. Tuple H:\n";
  for (std::uint64_t h : c.offsets) out << "     " << to_decimal(c.coefficient()) << "*x+" << h << "\n";

  const auto report = verify_admissible(c);
  out << "\n5. Admissibility: " << (report.admissible ? "admissible" : "NOT admissible") << " (checked primes: "
      << join(report.checked_primes) << ").\n";
  out << "   Every prime dividing g*q misses all offsets, and every prime p <= k divides g.\n\n";

  const auto blocked = verify_isolation(c);
  out << "6. Isolation: each non-offset h in [" << c.offsets.front() << ", " << c.offsets.back()
      << "] shares a prime with g*q, so g*q*n + h is composite once it exceeds that prime.\n";
  for (const auto& b : blocked) out << "     h = " << b.h << " blocked by " << b.blocking_prime << "\n";

  out << "\n7. Diameter B = " << c.offsets.back() << " - " << c.offsets.front() << " = " << c.B << ".\n";
  out << "   Whenever several forms are prime at the same n >= 1, they are consecutive primes,\n"
      << "   all = " << p.a << " (mod " << p.q << "), inside an interval of length " << c.B << ".\n";
  return out.str();
}

}  // namespace shiu
