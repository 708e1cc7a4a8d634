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

// Command-line front end. Talks to the library only through shiu.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiu/shiu.h"

namespace {

enum ExitCode { kOk = 0, kDomain = 1, kResource = 2, kInternal = 3 };

int exit_code_for(shiu_status status) {
  switch (status) {
    case SHIU_OK: return kOk;
    case SHIU_ERR_DOMAIN:
    case SHIU_ERR_NOT_FOUND:
    case SHIU_ERR_INVALID_ARGUMENT: return kDomain;
    case SHIU_ERR_RESOURCE:
    case SHIU_ERR_RANGE:
    case SHIU_ERR_IO: return kResource;
    case SHIU_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

struct ContextDeleter {
  void operator()(shiu_context* ctx) const { shiu_context_free(ctx); }
};
struct ConstructionDeleter {
  void operator()(shiu_construction* c) const { shiu_construction_free(c); }
};
struct StringDeleter {
  void operator()(char* s) const { shiu_string_free(s); }
};
using ContextPtr = std::unique_ptr<shiu_context, ContextDeleter>;
using ConstructionPtr = std::unique_ptr<shiu_construction, ConstructionDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

// Thrown once a library call fails; carries the status for the exit code.
struct Failure {
  shiu_status status;
  std::string message;
};

void check(shiu_context* ctx, shiu_status status) {
  if (status != SHIU_OK) throw Failure{status, shiu_context_last_error(ctx)};
}

struct CommonOptions {
  std::string format;
  std::string output;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts, const std::string& default_format,
                std::vector<std::string> formats) {
  opts.format = default_format;
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("-o,--output", opts.output, "Write output to this file instead of stdout");
  cmd->add_option("--threads", opts.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u));
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Failure{SHIU_ERR_IO, "cannot open " + path + " for writing"};
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  static int line(const char* text, size_t length, void* user) {
    auto* self = static_cast<Sink*>(user);
    self->stream().write(text, static_cast<std::streamsize>(length));
    self->stream().put('\n');
    return self->stream() ? 1 : 0;
  }

 private:
  std::ofstream file_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SHIU_ERR_IO, "cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void diagnose(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json line;
  line["error"] = kind;
  line["message"] = message;
  std::cerr << line.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Admissible tuples forcing consecutive congruent primes, and searches for such runs"};
  app.require_subcommand(0, 1);

  bool seed_doc = false;
  std::string load_cache;
  std::uint64_t height_ceiling = 0;
  std::uint64_t segment_width = 0;
  app.add_flag("--seed-doc", seed_doc, "Print a worked walkthrough of the q=3, a=1, k=5 construction");
  app.add_option("--load-sieve-cache", load_cache, "Reuse a sieve cache written by 'sieve-cache'");
  app.add_option("--height-ceiling", height_ceiling, "Largest integer any search may touch (default 2^40)");
  app.add_option("--segment-width", segment_width, "Integers per sieve segment");

  // construct
  CommonOptions construct_opts;
  std::uint64_t q = 0, k = 0, m = 0;
  std::int64_t a = 0;
  bool with_g = false, as_tuple = false;
  auto* construct = app.add_subcommand("construct", "Build the tuple and print its certificate");
  construct->add_option("--q", q, "Modulus (>= 3)")->required();
  construct->add_option("--a", a, "Residue coprime to q")->required();
  construct->add_option("--k", k, "Tuple length (>= 2)")->required();
  construct->add_option("--m", m, "Target prime count (metadata)");
  construct->add_flag("--with-g", with_g, "Include g as a decimal string");
  construct->add_flag("--tuple", as_tuple, "Print the tuple as g*x+h lines instead of the certificate");
  add_common(construct, construct_opts, "json", {"json", "text"});

  // verify
  CommonOptions verify_opts;
  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "Re-derive a certificate and compare every field");
  verify->add_option("--cert", cert_path, "Certificate JSON")->required();
  add_common(verify, verify_opts, "json", {"json"});

  // scan
  CommonOptions scan_opts;
  std::uint64_t n_lo = 0, n_hi = 0;
  auto* scan = app.add_subcommand("scan", "Primality-scan the windows g*q*n + [l_{t+1}, l_{t+k}]");
  scan->add_option("--cert", cert_path, "Certificate JSON")->required();
  scan->add_option("--n-lo", n_lo, "First n")->required();
  scan->add_option("--n-hi", n_hi, "Last n")->required();
  add_common(scan, scan_opts, "json", {"json"});

  // bounds
  CommonOptions bounds_opts;
  shiu_bound_grid grid{3, 3, 2, 2, 0, 0, 5.0};
  std::optional<std::int64_t> fixed_a;
  bool fit = false;
  auto* bounds = app.add_subcommand("bounds", "Tabulate B(q, a, k) over a grid");
  bounds->add_option("--q-min", grid.q_min)->required();
  bounds->add_option("--q-max", grid.q_max)->required();
  bounds->add_option("--k-min", grid.k_min)->required();
  bounds->add_option("--k-max", grid.k_max)->required();
  bounds->add_option("--L", grid.L, "Linnik exponent for the t window")->capture_default_str();
  bounds->add_option("--a", fixed_a, "Only this residue (default: every residue coprime to q)");
  bounds->add_flag("--fit", fit, "Print the log-log scaling fit instead of the table");
  add_common(bounds, bounds_opts, "csv", {"csv", "json"});

  // search
  CommonOptions search_opts;
  std::uint64_t cap = 100'000'000, bucket = 10;
  std::optional<std::uint64_t> bound;
  bool all = false, maximal = false, stats = false;
  auto* search = app.add_subcommand("search", "Find runs of m consecutive primes = a (mod q)");
  search->add_option("--q", q)->required();
  search->add_option("--a", a)->required();
  search->add_option("--m", m, "Run length (>= 2)")->required();
  search->add_option("--cap", cap, "Only primes below this height")->capture_default_str();
  search->add_flag("--all", all, "Stream every string instead of the first");
  search->add_flag("--maximal", maximal, "With --all, one record per maximal run");
  search->add_flag("--stats", stats, "Print the diameter histogram (CSV)");
  search->add_option("--bucket", bucket, "Histogram bucket width")->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--B", bound, "Count strings with diameter <= B");
  add_common(search, search_opts, "json", {"json", "csv"});

  // sieve-cache
  std::uint64_t cache_height = 0;
  std::string cache_path;
  auto* sieve_cache = app.add_subcommand("sieve-cache", "Write a reusable sieve cache file");
  sieve_cache->add_option("--height", cache_height, "Sieve every integer up to this height")->required();
  sieve_cache->add_option("--path", cache_path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    diagnose("usage", e.what());
    return kDomain;
  }

  shiu_context* raw = nullptr;
  if (const shiu_status s = shiu_context_new(&raw); s != SHIU_OK) {
    diagnose(shiu_status_name(s), "could not create context (check SHIU_SIEVE_BUDGET_MB)");
    return exit_code_for(s);
  }
  ContextPtr ctx(raw);

  std::string subcommand = "none";
  try {
    if (height_ceiling != 0) check(ctx.get(), shiu_context_set_height_ceiling(ctx.get(), height_ceiling));
    if (segment_width != 0) check(ctx.get(), shiu_context_set_segment_width(ctx.get(), segment_width));
    if (!load_cache.empty()) check(ctx.get(), shiu_context_load_sieve_cache(ctx.get(), load_cache.c_str()));

    if (seed_doc) {
      char* doc = nullptr;
      check(ctx.get(), shiu_seed_doc(ctx.get(), &doc));
      OwnedString owned(doc);
      std::cout << doc;
      if (app.get_subcommands().empty()) return kOk;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      diagnose("usage", "a subcommand is required");
      return kDomain;
    }
    subcommand = app.get_subcommands().front()->get_name();

    if (*construct) {
      check(ctx.get(), shiu_context_set_threads(ctx.get(), construct_opts.threads));
      Sink out(construct_opts.output);
      shiu_construction* c = nullptr;
      check(ctx.get(), shiu_construct(ctx.get(), q, a, k, m, &c));
      ConstructionPtr owned(c);
      char* text = nullptr;
      if (as_tuple) {
        check(ctx.get(), shiu_construction_tuple_text(ctx.get(), c, &text));
      } else if (construct_opts.format == "text") {
        check(ctx.get(), shiu_construction_walkthrough(ctx.get(), c, &text));
      } else {
        check(ctx.get(), shiu_construction_certificate(ctx.get(), c, with_g ? 1 : 0, &text));
      }
      OwnedString owned_text(text);
      out.stream() << text;
    } else if (*verify) {
      check(ctx.get(), shiu_context_set_threads(ctx.get(), verify_opts.threads));
      Sink out(verify_opts.output);
      const std::string cert = read_file(cert_path);
      char* report = nullptr;
      const shiu_status s = shiu_verify_certificate(ctx.get(), cert.c_str(), &report);
      OwnedString owned(report);
      if (report != nullptr) out.stream() << report << "\n";
      check(ctx.get(), s);
    } else if (*scan) {
      check(ctx.get(), shiu_context_set_threads(ctx.get(), scan_opts.threads));
      Sink out(scan_opts.output);
      const std::string cert = read_file(cert_path);
      shiu_construction* c = nullptr;
      check(ctx.get(), shiu_construction_from_certificate(ctx.get(), cert.c_str(), &c));
      ConstructionPtr owned(c);
      check(ctx.get(), shiu_scan_windows(ctx.get(), c, n_lo, n_hi, &Sink::line, &out));
    } else if (*bounds) {
      check(ctx.get(), shiu_context_set_threads(ctx.get(), bounds_opts.threads));
      Sink out(bounds_opts.output);
      if (fixed_a) {
        grid.fixed_a = 1;
        grid.a = *fixed_a;
      }
      char* text = nullptr;
      if (fit) {
        check(ctx.get(), shiu_bound_fit(ctx.get(), &grid, &text));
        OwnedString owned(text);
        out.stream() << text << "\n";
      } else {
        size_t misses = 0;
        const auto format = bounds_opts.format == "json" ? SHIU_FORMAT_JSON : SHIU_FORMAT_CSV;
        check(ctx.get(), shiu_bound_table(ctx.get(), &grid, format, &text, &misses));
        OwnedString owned(text);
        out.stream() << text;
        if (misses != 0) std::cerr << "warning: " << misses << " row(s) have t outside the window\n";
      }
    } else if (*search) {
      check(ctx.get(), shiu_context_set_threads(ctx.get(), search_opts.threads));
      Sink out(search_opts.output);
      if (stats || search_opts.format == "csv") {
        char* csv = nullptr;
        check(ctx.get(), shiu_diameter_stats(ctx.get(), q, a, m, cap, bucket, bound ? 1 : 0, bound.value_or(0), &csv));
        OwnedString owned(csv);
        out.stream() << csv;
      } else if (all) {
        check(ctx.get(), shiu_all_strings(ctx.get(), q, a, m, cap, maximal ? 1 : 0, &Sink::line, &out));
      } else {
        char* json = nullptr;
        check(ctx.get(), shiu_first_string(ctx.get(), q, a, m, cap, &json));
        OwnedString owned(json);
        out.stream() << json << "\n";
      }
    } else if (*sieve_cache) {
      check(ctx.get(), shiu_write_sieve_cache(ctx.get(), cache_height, cache_path.c_str()));
    }
    std::cout.flush();
    return kOk;
  } catch (const Failure& f) {
    std::cout.flush();
    diagnose(shiu_status_name(f.status), f.message);
    if (f.status == SHIU_ERR_INTERNAL) {
      nlohmann::ordered_json bundle;
      bundle["reproduction"]["version"] = shiu_version();
      bundle["reproduction"]["subcommand"] = subcommand;
      bundle["reproduction"]["argv"] = std::vector<std::string>(argv, argv + argc);
      bundle["reproduction"]["message"] = f.message;
      std::cerr << bundle.dump() << "\n";
    }
    return exit_code_for(f.status);
  }
}
