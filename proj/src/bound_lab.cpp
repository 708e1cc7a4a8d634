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

#include "shiu/bound_lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>

#include "shiu/arith.hpp"
#include "shiu/errors.hpp"

namespace shiu {

std::uint64_t LinnikConfig::M(std::uint64_t k) const {
  validate();
  return std::max<std::uint64_t>(k, static_cast<std::uint64_t>(std::ceil(L)));
}

std::uint64_t LinnikConfig::window_cap(std::uint64_t k) const {
  if (k < 1) throw DomainError("k must be >= 1");
  return (k - 1) * M(k) + k;
}

void LinnikConfig::validate() const {
  if (!std::isfinite(L) || L <= 0.0 || L > 1e9) throw DomainError("Linnik exponent L must be a positive real");
}

BoundRow measure_b(APIndex& idx, std::uint64_t k, const LinnikConfig& cfg, const ConstructionOptions& options) {
  const auto params = ConstructionParams::make(idx.q(), static_cast<std::int64_t>(idx.a()), k);
  const Construction c = build(params, idx, options);
  BoundRow row;
  row.q = params.q;
  row.a = params.a;
  row.k = k;
  row.t = c.t;
  row.B = c.B;
  row.window_cap = cfg.window_cap(k);
  row.t_in_window = row.t <= row.window_cap;
  return row;
}

BoundRow measure_b(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a, std::uint64_t k,
                   const LinnikConfig& cfg, const ConstructionOptions& options) {
  APIndex idx(std::move(sieve), q, a);
  return measure_b(idx, k, cfg, options);
}

std::vector<BoundRow> bound_table(std::shared_ptr<const SegmentedSieve> sieve, const BoundGrid& grid,
                                  const LinnikConfig& cfg, unsigned threads, const ConstructionOptions& options) {
  if (grid.q_min > grid.q_max || grid.k_min > grid.k_max) throw DomainError("empty bound grid");
  cfg.validate();

  struct Group {
    std::uint64_t q;
    std::int64_t a;           // as requested
    std::uint64_t a_display;  // reduced when valid
    std::optional<std::string> invalid;
  };
  std::vector<Group> groups;
  for (std::uint64_t q = grid.q_min; q <= grid.q_max; ++q) {
    if (grid.residues.fixed) {
      Group g{q, *grid.residues.fixed, 0, std::nullopt};
      try {
        g.a_display = normalize_residue(q, g.a);
      } catch (const Error& e) {
        g.a_display = q >= 1 ? mod_floor(g.a, q) : 0;
        g.invalid = e.what();
      }
      groups.push_back(g);
    } else {
      if (q < 3) {
        groups.push_back({q, 1, 1, std::string("q must be >= 3")});
        continue;
      }
      for (std::uint64_t a = 1; a < q; ++a) {
        if (gcd_u64(a, q) == 1) groups.push_back({q, static_cast<std::int64_t>(a), a, std::nullopt});
      }
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& x, const Group& y) { return std::tie(x.q, x.a_display) < std::tie(y.q, y.a_display); });

  auto run_group = [&](const Group& g) {
    std::vector<BoundRow> rows;
    std::optional<APIndex> idx;
    if (!g.invalid) idx.emplace(sieve, g.q, g.a);
    for (std::uint64_t k = grid.k_min; k <= grid.k_max; ++k) {
      BoundRow row;
      row.q = g.q;
      row.a = g.a_display;
      row.k = k;
      if (g.invalid) {
        row.error = *g.invalid;
      } else {
        try {
          row = measure_b(*idx, k, cfg, options);
        } catch (const Error& e) {
          row.error = e.what();
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  std::vector<std::vector<BoundRow>> per_group(groups.size());
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(groups.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < groups.size(); ++i) per_group[i] = run_group(groups[i]);
  } else {
    std::mutex next_mutex;
    std::size_t next = 0;
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard lock(next_mutex);
            if (next == groups.size()) return;
            i = next++;
          }
          per_group[i] = run_group(groups[i]);
        }
      }));
    }
    for (auto& f : pool) f.get();
  }

  std::vector<BoundRow> out;
  for (auto& rows : per_group) std::move(rows.begin(), rows.end(), std::back_inserter(out));
  return out;
}

ScalingFit scaling_fit(const std::vector<BoundRow>& rows) {
  std::vector<const BoundRow*> usable;
  for (const auto& r : rows) {
    if (!r.error && r.B > 0) usable.push_back(&r);
  }
  if (usable.size() < 2) throw DomainError("scaling fit needs at least two successful rows");

  auto varies = [&](auto field) {
    return std::any_of(usable.begin(), usable.end(), [&](const BoundRow* r) { return field(*r) != field(*usable[0]); });
  };
  const bool fit_q = varies([](const BoundRow& r) { return r.q; });
  const bool fit_k = varies([](const BoundRow& r) { return r.k; });
  if (!fit_q && !fit_k) throw DomainError("degenerate design: every row has the same q and k");

  const Eigen::Index cols = 1 + (fit_q ? 1 : 0) + (fit_k ? 1 : 0);
  const auto n = static_cast<Eigen::Index>(usable.size());
  if (n < cols) throw DomainError("degenerate design: fewer rows than fitted parameters");
  Eigen::MatrixXd X(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BoundRow& r = *usable[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    X(i, col++) = 1.0;
    if (fit_q) X(i, col++) = std::log(static_cast<double>(r.q));
    if (fit_k) X(i, col++) = std::log(static_cast<double>(r.k));
    y(i) = std::log(static_cast<double>(r.B));
  }
  const auto qr = X.colPivHouseholderQr();
  if (qr.rank() < cols) throw DomainError("degenerate design: log q and log k are collinear on these rows");
  const Eigen::VectorXd beta = qr.solve(y);

  ScalingFit fit;
  Eigen::Index col = 0;
  fit.intercept = beta(col++);
  if (fit_q) fit.exponent_q = beta(col++);
  if (fit_k) fit.exponent_k = beta(col++);
  const Eigen::VectorXd resid = y - X * beta;
  fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  fit.rows_used = usable.size();
  // Clean up round-off so constant data reports exact zeros.
  for (double* v : {&fit.exponent_q, &fit.exponent_k, &fit.residual}) {
    if (std::abs(*v) < 1e-12) *v = 0.0;
  }
  return fit;
}

bool verify_t_window(APIndex& idx, std::uint64_t k, const LinnikConfig& cfg) {
  if (k < 2) throw DomainError("k must be >= 2");
  const std::uint64_t cap = cfg.window_cap(k);
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (t_qualifies(idx, k, t)) return true;
  }
  return false;
}

bool verify_t_window(std::shared_ptr<const SegmentedSieve> sieve, std::uint64_t q, std::int64_t a,
                     std::uint64_t k, const LinnikConfig& cfg) {
  APIndex idx(std::move(sieve), q, a);
  return verify_t_window(idx, k, cfg);
}

std::string bound_table_csv(const std::vector<BoundRow>& rows) {
  std::string out = "q,a,k,t,B,window_cap,t_in_window\n";
  for (const auto& r : rows) {
    out += std::to_string(r.q) + "," + std::to_string(r.a) + "," + std::to_string(r.k) + ",";
    if (r.error) {
      out += ",,,error\n";
    } else {
      out += std::to_string(r.t) + "," + std::to_string(r.B) + "," + std::to_string(r.window_cap) + "," +
             (r.t_in_window ? "true" : "false") + "\n";
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const BoundRow& r) {
  nlohmann::ordered_json out;
  out["q"] = r.q;
  out["a"] = r.a;
  out["k"] = r.k;
  if (r.error) {
    out["error"] = *r.error;
    return out;
  }
  out["t"] = r.t;
  out["B"] = r.B;
  out["window_cap"] = r.window_cap;
  out["t_in_window"] = r.t_in_window;
  return out;
}

nlohmann::ordered_json to_json(const ScalingFit& fit) {
  nlohmann::ordered_json out;
  out["exponent_q"] = fit.exponent_q;
  out["exponent_k"] = fit.exponent_k;
  out["intercept"] = fit.intercept;
  out["residual"] = fit.residual;
  out["rows_used"] = fit.rows_used;
  return out;
}

}  // namespace shiu
