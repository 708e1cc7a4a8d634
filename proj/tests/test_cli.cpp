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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef SHIU_CLI_PATH
#error "SHIU_CLI_PATH must name the CLI binary"
#endif

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stderr is captured only when asked for.
Result run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(SHIU_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Result r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("shiu_cli_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("construct") {
  const Result r = run("construct --q 3 --a 1 --k 5 --with-g");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["t"] == 0);
  CHECK(j["offsets"] == nlohmann::json::array({7, 13, 19, 31, 37}));
  CHECK(j["g_factors"] == nlohmann::json::array({2, 3, 5, 11, 17, 23, 29}));
  CHECK(j["B"] == 30);
  CHECK(j["g_decimal"] == "3741870");

  const Result text = run("construct --q 3 --a 1 --k 5 --tuple");
  REQUIRE(text.code == 0);
  CHECK(text.out.rfind("11225610*x+7\n", 0) == 0);
  CHECK(line_count(text.out) == 5);

  const Result walk = run("construct --q 3 --a 1 --k 5 --format text");
  REQUIRE(walk.code == 0);
  CHECK(walk.out.find("B = 37 - 7 = 30") != std::string::npos);
}

TEST_CASE("domain errors exit 1 with a JSON diagnostic") {
  const Result r = run("construct --q 4 --a 2 --k 5", true);
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "domain");
  CHECK(j["message"] == "gcd(a,q) != 1");

  CHECK(run("construct --q 3 --a 1").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("search --q 3 --a 1 --m 2 --cap 30").code == 1);
}

TEST_CASE("resource errors exit 2") {
  CHECK(run("--height-ceiling 1000 search --q 3 --a 1 --m 4 --cap 100000").code == 2);
  CHECK(run("verify --cert /nonexistent/cert.json").code == 2);
  CHECK(run("--load-sieve-cache /nonexistent/cache.bin search --q 3 --a 1 --m 2").code == 2);
}

TEST_CASE("verify round trip and tampering") {
  const auto path = temp_file("cert.json");
  const Result made = run("construct --q 7 --a 3 --k 6 -o " + path.string());
  REQUIRE(made.code == 0);
  const Result ok = run("verify --cert " + path.string());
  CHECK(ok.code == 0);
  const auto report = nlohmann::json::parse(ok.out);
  CHECK(report["ok"] == true);
  CHECK(report["byte_exact"] == true);

  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto cert = nlohmann::ordered_json::parse(buf.str());
  cert["B"] = cert["B"].get<int>() + 7;
  write_file(path, cert.dump() + "\n");
  const Result bad = run("verify --cert " + path.string());
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out)["mismatches"] == nlohmann::json::array({"B"}));

  write_file(path, "{ nope");
  CHECK(run("verify --cert " + path.string()).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("scan") {
  const auto path = temp_file("scan_cert.json");
  REQUIRE(run("construct --q 3 --a 1 --k 5 -o " + path.string()).code == 0);
  const Result r = run("scan --cert " + path.string() + " --n-lo 0 --n-hi 3 --threads 2");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> rows;
  while (std::getline(lines, line)) rows.push_back(nlohmann::json::parse(line));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0]["degenerate"] == true);
  CHECK(rows[2]["prime_offsets"] == nlohmann::json::array({37}));
  CHECK(rows[3]["prime_offsets"] == nlohmann::json::array({7, 13, 31}));
  std::filesystem::remove(path);
}

TEST_CASE("bounds") {
  const Result csv = run("bounds --q-min 3 --q-max 5 --k-min 5 --k-max 5");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("q,a,k,t,B,window_cap,t_in_window\n", 0) == 0);
  CHECK(line_count(csv.out) == 9);
  CHECK(csv.out.find("3,1,5,0,30,25,true\n") != std::string::npos);

  const Result single = run("bounds --q-min 3 --q-max 3 --k-min 2 --k-max 6 --a 1 --format json");
  REQUIRE(single.code == 0);
  CHECK(nlohmann::json::parse(single.out).size() == 5);

  const Result fit = run("bounds --q-min 3 --q-max 12 --k-min 2 --k-max 8 --fit --threads 4");
  REQUIRE(fit.code == 0);
  CHECK(nlohmann::json::parse(fit.out).contains("exponent_k"));

  CHECK(run("bounds --q-min 3 --q-max 3 --k-min 5 --k-max 5 --L -1").code == 1);
}

TEST_CASE("search") {
  const Result first = run("search --q 4 --a 3 --m 2");
  REQUIRE(first.code == 0);
  CHECK(nlohmann::json::parse(first.out)["primes"] == nlohmann::json::array({7, 11}));

  const Result all = run("search --q 3 --a 1 --m 2 --all --cap 100");
  REQUIRE(all.code == 0);
  CHECK(line_count(all.out) == 3);

  const Result maximal = run("search --q 3 --a 1 --m 2 --all --maximal --cap 100");
  REQUIRE(maximal.code == 0);
  CHECK(line_count(maximal.out) == 3);

  const Result csv = run("search --q 3 --a 1 --m 2 --cap 100 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("bucket_lo,bucket_hi,count\n", 0) == 0);

  const Result stats = run("search --q 3 --a 1 --m 2 --stats --cap 1000000 --B 30");
  REQUIRE(stats.code == 0);
  CHECK(stats.out.find("16394,6,12,96,30,15512") != std::string::npos);
}

TEST_CASE("sieve cache and seed doc") {
  const auto path = temp_file("cache.bin");
  REQUIRE(run("sieve-cache --height 200000 --path " + path.string()).code == 0);
  const Result r = run("--load-sieve-cache " + path.string() + " search --q 5 --a 2 --m 3");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["primes"] == nlohmann::json::array({1627, 1637, 1657}));
  std::filesystem::remove(path);

  const Result doc = run("--seed-doc");
  REQUIRE(doc.code == 0);
  CHECK(doc.out.find("3741870") != std::string::npos);
}
