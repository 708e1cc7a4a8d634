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

#include "shiu/shiu.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "shiu/bound_lab.hpp"
#include "shiu/construction.hpp"
#include "shiu/errors.hpp"
#include "shiu/prime_engine.hpp"
#include "shiu/shiu_search.hpp"
#include "shiu/tuples.hpp"

struct shiu_context {
  shiu::SieveConfig config;
  unsigned threads = 1;
  shiu::ConstructionOptions options;
  std::vector<shiu::SieveSegment> cache;
  std::shared_ptr<const shiu::SegmentedSieve> sieve;
  std::string last_error;

  std::shared_ptr<const shiu::SegmentedSieve> get_sieve() {
    if (!sieve) {
      auto fresh = std::make_shared<shiu::SegmentedSieve>(config);
      if (!cache.empty()) fresh->adopt_cache(cache);
      sieve = std::move(fresh);
    }
    return sieve;
  }
};

struct shiu_construction {
  shiu::Construction value;
};

namespace {

shiu_status status_for(shiu::ErrorKind kind) {
  switch (kind) {
    case shiu::ErrorKind::Domain: return SHIU_ERR_DOMAIN;
    case shiu::ErrorKind::NotFound: return SHIU_ERR_NOT_FOUND;
    case shiu::ErrorKind::Resource: return SHIU_ERR_RESOURCE;
    case shiu::ErrorKind::Range: return SHIU_ERR_RANGE;
    case shiu::ErrorKind::Io: return SHIU_ERR_IO;
    case shiu::ErrorKind::Internal: return SHIU_ERR_INTERNAL;
  }
  return SHIU_ERR_INTERNAL;
}

template <class F>
shiu_status guarded(shiu_context* ctx, F&& body) {
  if (ctx == nullptr) return SHIU_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    return body();
  } catch (const shiu::Error& e) {
    ctx->last_error = e.what();
    return status_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    ctx->last_error = e.what();
    return SHIU_ERR_DOMAIN;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return SHIU_ERR_RESOURCE;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return SHIU_ERR_INTERNAL;
  }
}

shiu_status invalid(shiu_context* ctx, const char* what) {
  ctx->last_error = what;
  return SHIU_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

shiu::BoundGrid to_grid(const shiu_bound_grid& g) {
  shiu::BoundGrid grid;
  grid.q_min = g.q_min;
  grid.q_max = g.q_max;
  grid.k_min = g.k_min;
  grid.k_max = g.k_max;
  if (g.fixed_a) grid.residues = shiu::ResiduePolicy::only(g.a);
  return grid;
}

bool emit(shiu_line_sink sink, void* user, const std::string& line) {
  return sink(line.c_str(), line.size(), user) != 0;
}

}  // namespace

extern "C" {

const char* shiu_version(void) { return "1.0.0"; }

const char* shiu_status_name(int status) {
  switch (status) {
    case SHIU_OK: return "ok";
    case SHIU_ERR_DOMAIN: return "domain";
    case SHIU_ERR_NOT_FOUND: return "not_found";
    case SHIU_ERR_RESOURCE: return "resource";
    case SHIU_ERR_RANGE: return "range";
    case SHIU_ERR_IO: return "io";
    case SHIU_ERR_INTERNAL: return "internal";
    case SHIU_ERR_INVALID_ARGUMENT: return "invalid_argument";
  }
  return "unknown";
}

void shiu_string_free(char* s) { std::free(s); }

shiu_status shiu_context_new(shiu_context** out) {
  if (out == nullptr) return SHIU_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    auto ctx = std::make_unique<shiu_context>();
    ctx->config = shiu::SieveConfig::from_environment();
    *out = ctx.release();
    return SHIU_OK;
  } catch (const shiu::Error& e) {
    return status_for(e.kind());
  } catch (...) {
    return SHIU_ERR_RESOURCE;
  }
}

void shiu_context_free(shiu_context* ctx) { delete ctx; }

const char* shiu_context_last_error(const shiu_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->last_error.c_str();
}

shiu_status shiu_context_set_segment_width(shiu_context* ctx, uint64_t width) {
  return guarded(ctx, [&] {
    shiu::SieveConfig next = ctx->config;
    next.segment_width = width;
    next.validate();
    ctx->config = next;
    ctx->sieve.reset();
    return SHIU_OK;
  });
}

shiu_status shiu_context_set_height_ceiling(shiu_context* ctx, uint64_t ceiling) {
  return guarded(ctx, [&] {
    shiu::SieveConfig next = ctx->config;
    next.height_ceiling = ceiling;
    next.validate();
    ctx->config = next;
    ctx->sieve.reset();
    return SHIU_OK;
  });
}

shiu_status shiu_context_set_budget_bytes(shiu_context* ctx, uint64_t bytes) {
  return guarded(ctx, [&] {
    shiu::SieveConfig next = ctx->config;
    next.budget_bytes = bytes;
    next.validate();
    ctx->config = next;
    ctx->sieve.reset();
    return SHIU_OK;
  });
}

shiu_status shiu_context_set_threads(shiu_context* ctx, unsigned threads) {
  return guarded(ctx, [&] {
    if (threads == 0) return invalid(ctx, "threads must be >= 1");
    ctx->threads = threads;
    return SHIU_OK;
  });
}

shiu_status shiu_context_set_t_cap(shiu_context* ctx, uint64_t t_cap) {
  return guarded(ctx, [&] {
    ctx->options.t_cap = t_cap;
    return SHIU_OK;
  });
}

shiu_status shiu_context_load_sieve_cache(shiu_context* ctx, const char* path) {
  return guarded(ctx, [&] {
    if (path == nullptr) return invalid(ctx, "null path");
    auto segments = shiu::read_sieve_cache(path);
    auto fresh = std::make_shared<shiu::SegmentedSieve>(ctx->config);
    fresh->adopt_cache(segments);
    ctx->cache = std::move(segments);
    ctx->sieve = std::move(fresh);
    return SHIU_OK;
  });
}

shiu_status shiu_write_sieve_cache(shiu_context* ctx, uint64_t height, const char* path) {
  return guarded(ctx, [&] {
    if (path == nullptr) return invalid(ctx, "null path");
    shiu::write_sieve_cache(*ctx->get_sieve(), height, path);
    return SHIU_OK;
  });
}

shiu_status shiu_nth_ap_prime(shiu_context* ctx, uint64_t q, int64_t a, uint64_t n, uint64_t* out) {
  return guarded(ctx, [&] {
    if (out == nullptr) return invalid(ctx, "null output");
    shiu::APIndex idx(ctx->get_sieve(), q, a);
    *out = shiu::nth_ap_prime(idx, n);
    return SHIU_OK;
  });
}

shiu_status shiu_count_ap_primes(shiu_context* ctx, uint64_t q, int64_t a, uint64_t y, uint64_t* out) {
  return guarded(ctx, [&] {
    if (out == nullptr) return invalid(ctx, "null output");
    *out = shiu::count_ap_primes(*ctx->get_sieve(), q, a, y);
    return SHIU_OK;
  });
}

shiu_status shiu_check_tuple(shiu_context* ctx, const char* tuple, int format, char** report_json) {
  return guarded(ctx, [&] {
    if (tuple == nullptr || report_json == nullptr) return invalid(ctx, "null argument");
    *report_json = nullptr;
    std::optional<shiu::KTuple> parsed;
    if (format == SHIU_FORMAT_TEXT) {
      parsed.emplace(shiu::parse_tuple_text(tuple));
    } else if (format == SHIU_FORMAT_JSON) {
      parsed.emplace(shiu::tuple_from_json(nlohmann::ordered_json::parse(tuple)));
    } else {
      return invalid(ctx, "tuple format must be text or json");
    }
    *report_json = duplicate(shiu::to_json(shiu::is_admissible(*parsed)).dump());
    return SHIU_OK;
  });
}

shiu_status shiu_construct(shiu_context* ctx, uint64_t q, int64_t a, uint64_t k, uint64_t m,
                           shiu_construction** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) return invalid(ctx, "null output");
    *out = nullptr;
    const auto params = shiu::ConstructionParams::make(q, a, k, m == 0 ? std::nullopt : std::optional<uint64_t>(m));
    *out = new shiu_construction{shiu::build(params, ctx->get_sieve(), ctx->options)};
    return SHIU_OK;
  });
}

shiu_status shiu_construction_from_certificate(shiu_context* ctx, const char* json, shiu_construction** out) {
  return guarded(ctx, [&] {
    if (json == nullptr || out == nullptr) return invalid(ctx, "null argument");
    *out = nullptr;
    *out = new shiu_construction{shiu::certificate_from_json(nlohmann::ordered_json::parse(json))};
    return SHIU_OK;
  });
}

void shiu_construction_free(shiu_construction* c) { delete c; }

uint64_t shiu_construction_q(const shiu_construction* c) { return c ? c->value.params.q : 0; }
uint64_t shiu_construction_a(const shiu_construction* c) { return c ? c->value.params.a : 0; }
uint64_t shiu_construction_k(const shiu_construction* c) { return c ? c->value.params.k : 0; }
uint64_t shiu_construction_t(const shiu_construction* c) { return c ? c->value.t : 0; }
uint64_t shiu_construction_B(const shiu_construction* c) { return c ? c->value.B : 0; }
size_t shiu_construction_offset_count(const shiu_construction* c) { return c ? c->value.offsets.size() : 0; }
uint64_t shiu_construction_offset(const shiu_construction* c, size_t i) {
  return c && i < c->value.offsets.size() ? c->value.offsets[i] : 0;
}

shiu_status shiu_construction_certificate(shiu_context* ctx, const shiu_construction* c, int include_g, char** out) {
  return guarded(ctx, [&] {
    if (c == nullptr || out == nullptr) return invalid(ctx, "null argument");
    *out = nullptr;
    *out = duplicate(shiu::certificate_text(c->value, include_g != 0));
    return SHIU_OK;
  });
}

shiu_status shiu_construction_tuple_text(shiu_context* ctx, const shiu_construction* c, char** out) {
  return guarded(ctx, [&] {
    if (c == nullptr || out == nullptr) return invalid(ctx, "null argument");
    *out = nullptr;
    *out = duplicate(shiu::to_text(shiu::as_ktuple(c->value)));
    return SHIU_OK;
  });
}

shiu_status shiu_construction_verify_admissible(shiu_context* ctx, const shiu_construction* c, char** report_json) {
  return guarded(ctx, [&] {
    if (c == nullptr || report_json == nullptr) return invalid(ctx, "null argument");
    *report_json = nullptr;
    *report_json = duplicate(shiu::to_json(shiu::verify_admissible(c->value)).dump());
    return SHIU_OK;
  });
}

shiu_status shiu_construction_verify_isolation(shiu_context* ctx, const shiu_construction* c, char** blocked_json) {
  return guarded(ctx, [&] {
    if (c == nullptr || blocked_json == nullptr) return invalid(ctx, "null argument");
    *blocked_json = nullptr;
    *blocked_json = duplicate(shiu::to_json(shiu::verify_isolation(c->value)).dump());
    return SHIU_OK;
  });
}

shiu_status shiu_construction_walkthrough(shiu_context* ctx, const shiu_construction* c, char** out) {
  return guarded(ctx, [&] {
    if (c == nullptr || out == nullptr) return invalid(ctx, "null argument");
    *out = nullptr;
    *out = duplicate(shiu::walkthrough(c->value));
    return SHIU_OK;
  });
}

shiu_status shiu_scan_windows(shiu_context* ctx, const shiu_construction* c, uint64_t n_lo, uint64_t n_hi,
                              shiu_line_sink sink, void* user) {
  return guarded(ctx, [&] {
    if (c == nullptr || sink == nullptr) return invalid(ctx, "null argument");
    if (n_lo > n_hi) throw shiu::DomainError("scan requires n_lo <= n_hi");
    // Bounded blocks keep memory flat for long scans.
    constexpr uint64_t kBlock = 4096;
    std::optional<uint64_t> violation;
    bool stopped = false;
    for (uint64_t lo = n_lo; !stopped; lo += kBlock) {
      const uint64_t hi = n_hi - lo < kBlock ? n_hi : lo + kBlock - 1;
      for (const auto& report : shiu::scan_windows(c->value, lo, hi, ctx->threads)) {
        if (!report.degenerate && !(report.isolation_ok && report.congruence_ok) && !violation) violation = report.n;
        if (!emit(sink, user, shiu::to_json(report).dump())) {
          stopped = true;
          break;
        }
      }
      if (hi == n_hi) break;
    }
    if (violation) {
      throw shiu::InternalError("window n=" + std::to_string(*violation) + " holds a prime off the offsets");
    }
    return SHIU_OK;
  });
}

shiu_status shiu_verify_certificate(shiu_context* ctx, const char* certificate, char** report_json) {
  return guarded(ctx, [&] {
    if (certificate == nullptr || report_json == nullptr) return invalid(ctx, "null argument");
    *report_json = nullptr;
    const auto check = shiu::verify_certificate(certificate, ctx->get_sieve(), ctx->options);
    nlohmann::ordered_json report;
    report["ok"] = check.fields_match;
    report["byte_exact"] = check.byte_exact;
    report["mismatches"] = check.mismatches;
    *report_json = duplicate(report.dump());
    if (!check.fields_match) {
      std::string fields;
      for (const auto& f : check.mismatches) fields += (fields.empty() ? "" : ",") + f;
      ctx->last_error = "certificate mismatch in: " + fields;
      return SHIU_ERR_DOMAIN;
    }
    return SHIU_OK;
  });
}

shiu_status shiu_bound_table(shiu_context* ctx, const shiu_bound_grid* grid, int format, char** out,
                             size_t* window_misses) {
  return guarded(ctx, [&] {
    if (grid == nullptr || out == nullptr) return invalid(ctx, "null argument");
    *out = nullptr;
    const auto rows = shiu::bound_table(ctx->get_sieve(), to_grid(*grid), shiu::LinnikConfig{grid->L},
                                        ctx->threads, ctx->options);
    if (window_misses != nullptr) {
      *window_misses = 0;
      for (const auto& r : rows) {
        if (!r.error && !r.t_in_window) ++*window_misses;
      }
    }
    if (format == SHIU_FORMAT_CSV) {
      *out = duplicate(shiu::bound_table_csv(rows));
    } else if (format == SHIU_FORMAT_JSON) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) arr.push_back(shiu::to_json(r));
      *out = duplicate(arr.dump() + "\n");
    } else {
      return invalid(ctx, "bound table format must be csv or json");
    }
    return SHIU_OK;
  });
}

shiu_status shiu_bound_fit(shiu_context* ctx, const shiu_bound_grid* grid, char** fit_json) {
  return guarded(ctx, [&] {
    if (grid == nullptr || fit_json == nullptr) return invalid(ctx, "null argument");
    *fit_json = nullptr;
    const auto rows = shiu::bound_table(ctx->get_sieve(), to_grid(*grid), shiu::LinnikConfig{grid->L},
                                        ctx->threads, ctx->options);
    *fit_json = duplicate(shiu::to_json(shiu::scaling_fit(rows)).dump());
    return SHIU_OK;
  });
}

shiu_status shiu_verify_t_window(shiu_context* ctx, uint64_t q, int64_t a, uint64_t k, double L, int* out) {
  return guarded(ctx, [&] {
    if (out == nullptr) return invalid(ctx, "null output");
    *out = shiu::verify_t_window(ctx->get_sieve(), q, a, k, shiu::LinnikConfig{L}) ? 1 : 0;
    return SHIU_OK;
  });
}

shiu_status shiu_first_string(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap, char** json) {
  return guarded(ctx, [&] {
    if (json == nullptr) return invalid(ctx, "null output");
    *json = nullptr;
    *json = duplicate(shiu::to_json(shiu::first_string(*ctx->get_sieve(), q, a, m, cap)).dump());
    return SHIU_OK;
  });
}

shiu_status shiu_all_strings(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap, int maximal_only,
                             shiu_line_sink sink, void* user) {
  return guarded(ctx, [&] {
    if (sink == nullptr) return invalid(ctx, "null sink");
    const auto mode = maximal_only ? shiu::RunMode::MaximalOnly : shiu::RunMode::Overlapping;
    shiu::all_strings(*ctx->get_sieve(), q, a, m, cap, mode,
                      [&](const shiu::ShiuString& s) { return emit(sink, user, shiu::to_json(s).dump()); });
    return SHIU_OK;
  });
}

shiu_status shiu_diameter_stats(shiu_context* ctx, uint64_t q, int64_t a, uint64_t m, uint64_t cap,
                                uint64_t bucket_width, int has_bound, uint64_t bound, char** csv) {
  return guarded(ctx, [&] {
    if (csv == nullptr) return invalid(ctx, "null output");
    *csv = nullptr;
    shiu::DiameterAccumulator acc;
    shiu::all_strings(*ctx->get_sieve(), q, a, m, cap, shiu::RunMode::Overlapping, [&](const shiu::ShiuString& s) {
      acc.add(s);
      return true;
    });
    const auto stats = acc.finish(bucket_width, has_bound ? std::optional<uint64_t>(bound) : std::nullopt);
    *csv = duplicate(shiu::diameter_stats_csv(stats));
    return SHIU_OK;
  });
}

shiu_status shiu_seed_doc(shiu_context* ctx, char** out) {
  return guarded(ctx, [&] {
    if (out == nullptr) return invalid(ctx, "null output");
    *out = nullptr;
    const auto c = shiu::build(shiu::ConstructionParams::make(3, 1, 5), ctx->get_sieve(), ctx->options);
    *out = duplicate(shiu::walkthrough(c));
    return SHIU_OK;
  });
}

}  // extern "C"
