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
#include <vector>

#include <json.hpp>

#include "shiu/construction.hpp"
#include "shiu/prime_engine.hpp"

namespace shiu {

/// User-supplied Linnik exponent L. The default is a commonly quoted modern
/// value; nothing here depends on it being sharp.
struct LinnikConfig {
  double L = 5.0;

  /// max{k, ceil(L)}
  std::uint64_t M(std::uint64_t k) const;
  /// (k - 1) * M + k, the last shift the window argument needs to inspect.
  std::uint64_t window_cap(std::uint64_t k) const;
  void validate() const;
};

struct BoundRow {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t k = 0;
  std::uint64_t t = 0;
  std::uint64_t B = 0;
  std::uint64_t window_cap = 0;
  bool t_in_window = false;
  std::optional<std::string> error;  // set for rows that failed to build

  friend bool operator==(const BoundRow&, const BoundRow&) = default;
};

BoundRow measure_b(APIndex& idx, std::uint64_t k, const LinnikConfig& cfg, const ConstructionOptions& options = {});
BoundRow measure_b(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a, std::uint64_t k,
                   const LinnikConfig& cfg, const ConstructionOptions& options = {});

/// Either every residue coprime to q, or one fixed a.
struct ResiduePolicy {
  std::optional<std::int64_t> fixed;

  static ResiduePolicy all_coprime() { return {}; }
  static ResiduePolicy only(std::int64_t a) { return {a}; }
};

struct BoundGrid {
  std::uint64_t q_min = 3;
  std::uint64_t q_max = 3;
  ResiduePolicy residues;
  std::uint64_t k_min = 2;
  std::uint64_t k_max = 2;
};

/// One row per (q, a, k) in lexicographic order. Rows that fail carry an
/// error message instead of being dropped. Rows are computed on up to
/// `threads` workers, one (q, a) pair at a time; output does not depend on
/// the thread count.
std::vector<BoundRow> bound_table(std::shared_ptr<const SegmentedSieve> sieve, const BoundGrid& grid,
                                  const LinnikConfig& cfg, unsigned threads = 1,
                                  const ConstructionOptions& options = {});

struct ScalingFit {
  double exponent_q = 0.0;
  double exponent_k = 0.0;
  double intercept = 0.0;  // log of the fitted constant
  double residual = 0.0;   // RMS of log B residuals
  std::size_t rows_used = 0;

  /// The fitted k exponent does not exceed 2 + slack.
  bool k_exponent_plausible(double slack) const { return exponent_k <= 2.0 + slack; }
};

/// Least squares log B ~ c + e_q log q + e_k log k over the non-error rows.
/// A regressor that is constant across the rows is dropped and its exponent
/// reported as 0. Throws DomainError when the design cannot be fitted.
ScalingFit scaling_fit(const std::vector<BoundRow>& rows);

/// True iff some t in [0, window_cap(k)] has k < l_{t+1} and l_{t+k} < l_{t+1}^2.
bool verify_t_window(APIndex& idx, std::uint64_t k, const LinnikConfig& cfg);
bool verify_t_window(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a,
                     std::uint64_t k, const LinnikConfig& cfg);

/// Header "q,a,k,t,B,window_cap,t_in_window". Error rows leave t, B and
/// window_cap empty and put "error" in the last column.
std::string bound_table_csv(const std::vector<BoundRow>& rows);
nlohmann::ordered_json to_json(const BoundRow& row);
nlohmann::ordered_json to_json(const ScalingFit& fit);

}  // namespace shiu
