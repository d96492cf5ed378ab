// C API, exercised through the shared library only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kzeta.h"

namespace {

struct Config {
  kz_config* p = nullptr;
  Config() { REQUIRE(kz_config_new(&p) == KZ_OK); }
  ~Config() { kz_config_free(p); }
};

struct Report {
  kz_report* p = nullptr;
  ~Report() { kz_report_free(p); }
};

std::string take(char* s) {
  std::string out(s ? s : "");
  kz_string_free(s);
  return out;
}

std::string text(const kz_report* r, const char* format) {
  char* s = nullptr;
  REQUIRE(kz_report_text(r, format, &s) == KZ_OK);
  return take(s);
}

nlohmann::json report_json(const kz_report* r) { return nlohmann::json::parse(text(r, "json")); }

}  // namespace

TEST_CASE("null arguments are rejected") {
  CHECK(kz_config_new(nullptr) == KZ_INVALID_ARGUMENT);
  CHECK(std::string(kz_last_error()).find("null") != std::string::npos);
  Config c;
  CHECK(kz_run(nullptr, c.p, nullptr) == KZ_INVALID_ARGUMENT);
  CHECK(kz_config_set(c.p, "pi", nullptr) == KZ_INVALID_ARGUMENT);
}

TEST_CASE("config keys, values and hash") {
  Config c;
  char* h0 = nullptr;
  REQUIRE(kz_config_hash(c.p, &h0) == KZ_OK);
  const std::string hash0 = take(h0);
  CHECK(hash0.size() == 16);

  CHECK(kz_config_set(c.p, "cutoff", "12") == KZ_OK);
  CHECK(kz_config_set(c.p, "enumeration.height", "3") == KZ_OK);
  CHECK(kz_config_set(c.p, "s", "") == KZ_OK);
  CHECK(kz_config_set(c.p, "s", "2.5,0.5") == KZ_OK);
  char* j = nullptr;
  REQUIRE(kz_config_to_json(c.p, &j) == KZ_OK);
  const auto cfg = nlohmann::json::parse(take(j));
  CHECK(cfg["enumeration"]["cutoff"] == 12.0);
  CHECK(cfg["enumeration"]["height"] == 3);
  CHECK(cfg["zeta"]["s"].size() == 1);

  char* h1 = nullptr;
  REQUIRE(kz_config_hash(c.p, &h1) == KZ_OK);
  CHECK(take(h1) != hash0);

  // the output directory does not enter the hash
  char* h2 = nullptr;
  REQUIRE(kz_config_set(c.p, "out", "/tmp/somewhere") == KZ_OK);
  REQUIRE(kz_config_hash(c.p, &h2) == KZ_OK);
  char* h3 = nullptr;
  REQUIRE(kz_config_set(c.p, "out", "") == KZ_OK);
  REQUIRE(kz_config_hash(c.p, &h3) == KZ_OK);
  CHECK(take(h2) == take(h3));
}

TEST_CASE("invalid configs have distinct diagnostics") {
  Config c;
  CHECK(kz_config_set(c.p, "cutoff", "-1") == KZ_INVALID_ARGUMENT);
  CHECK(kz_config_set(c.p, "height", "two") == KZ_INVALID_ARGUMENT);
  CHECK(std::string(kz_last_error()).find("height") != std::string::npos);
  CHECK(kz_config_set(c.p, "no-such-key", "1") == KZ_INVALID_ARGUMENT);
  CHECK(kz_config_set(c.p, "pi", "0") == KZ_INVALID_ARGUMENT);
  CHECK(kz_config_set(c.p, "format", "xml") == KZ_INVALID_ARGUMENT);
  CHECK(kz_config_load_json(c.p, "{\"enumeration\": ") == KZ_PARSE);
  CHECK(kz_config_load_json(c.p, "{\"enumeration\": {\"cutoff\": 10}, \"zeta\": {\"s\": [\"3\"]}}") == KZ_OK);

  Report r;
  CHECK(kz_run("no-such-command", c.p, &r.p) == KZ_INVALID_ARGUMENT);
  CHECK(r.p == nullptr);
  REQUIRE(kz_config_set(c.p, "s", "0.5,1") == KZ_OK);
  CHECK(kz_run("zeta-w", c.p, &r.p) == KZ_INVALID_ARGUMENT);
  CHECK(std::string(kz_last_error()).find("Re s > 1") != std::string::npos);
}

TEST_CASE("missing and damaged table files") {
  Config c;
  REQUIRE(kz_config_set(c.p, "table", "/nonexistent/table.json") == KZ_OK);
  Report r;
  CHECK(kz_run("zeta-w", c.p, &r.p) == KZ_IO);

  const auto path = (std::filesystem::temp_directory_path() / "kzeta_capi_table.json").string();
  {
    std::ofstream f(path);
    f << "{\"version\": 999}";
  }
  REQUIRE(kz_config_set(c.p, "table", path.c_str()) == KZ_OK);
  CHECK(kz_run("zeta-w", c.p, &r.p) == KZ_SCHEMA_VERSION);
  {
    std::ofstream f(path);
    f << "{\"version\": 1, \"classes\": [";
  }
  CHECK(kz_run("zeta-w", c.p, &r.p) == KZ_PARSE);
  std::remove(path.c_str());
}

TEST_CASE("product formula on an empty table passes vacuously") {
  Config c;
  REQUIRE(kz_config_set(c.p, "cutoff", "2") == KZ_OK);
  Report r;
  REQUIRE(kz_run("verify-product", c.p, &r.p) == KZ_OK);
  int pass = 0;
  REQUIRE(kz_report_verdict(r.p, &pass) == KZ_OK);
  CHECK(pass == 1);
  const auto j = report_json(r.p);
  CHECK(j["results"]["table"]["classes"] == 0);
  for (const auto& row : j["results"]["W"]) {
    CHECK(row["W_induced"][0] == 0.0);
    CHECK(row["W_irreducible_sum"][0] == 0.0);
  }
}

TEST_CASE("factorization with Gamma_1 = Gamma is exact") {
  Config c;
  REQUIRE(kz_config_set(c.p, "pi", "full") == KZ_OK);
  REQUIRE(kz_config_set(c.p, "cutoff", "10") == KZ_OK);
  Report r;
  REQUIRE(kz_run("verify-factorization", c.p, &r.p) == KZ_OK);
  for (const auto& ch : report_json(r.p)["checks"]) CHECK(ch["value"] == 0.0);
}

TEST_CASE("reports are deterministic and self-describing") {
  Config c;
  REQUIRE(kz_config_set(c.p, "cutoff", "10") == KZ_OK);
  Report a, b;
  REQUIRE(kz_run("cusps", c.p, &a.p) == KZ_OK);
  REQUIRE(kz_run("cusps", c.p, &b.p) == KZ_OK);
  CHECK(text(a.p, "json") == text(b.p, "json"));
  const auto j = report_json(a.p);
  CHECK(j["schema"] == "kzeta-report");
  CHECK(j["code_version"] == kz_version());
  CHECK(j["config"]["enumeration"]["cutoff"] == 10.0);
  CHECK(j["verdict"] == "pass");
  CHECK(j["results"]["cusps"].size() == 3);

  int total = 0, failed = 0;
  REQUIRE(kz_report_checks(a.p, &total, &failed) == KZ_OK);
  CHECK(total > 0);
  CHECK(failed == 0);
  const auto csv = text(a.p, "csv");
  CHECK(csv.rfind("command,check,value,tolerance,pass\n", 0) == 0);
  char* bad = nullptr;
  CHECK(kz_report_text(a.p, "xml", &bad) == KZ_INVALID_ARGUMENT);
}

TEST_CASE("a failed check gives a fail verdict, not an error") {
  Config c;
  REQUIRE(kz_config_set(c.p, "cutoff", "10") == KZ_OK);
  REQUIRE(kz_config_set(c.p, "tol", "1e-300") == KZ_OK);
  Report r;
  REQUIRE(kz_run("verify-product", c.p, &r.p) == KZ_OK);
  int pass = 1;
  REQUIRE(kz_report_verdict(r.p, &pass) == KZ_OK);
  CHECK(pass == 0);
  CHECK(report_json(r.p)["verdict"] == "fail");
}

TEST_CASE("enumerate writes its artifacts") {
  const auto dir = std::filesystem::temp_directory_path() / "kzeta_capi_out";
  std::filesystem::remove_all(dir);
  Config c;
  REQUIRE(kz_config_set(c.p, "cutoff", "8") == KZ_OK);
  REQUIRE(kz_config_set(c.p, "out", dir.string().c_str()) == KZ_OK);
  Report r;
  REQUIRE(kz_run("enumerate", c.p, &r.p) == KZ_OK);
  const auto j = report_json(r.p);
  REQUIRE(j["artifacts"].size() == 3);
  for (const auto& name : j["artifacts"]) CHECK(std::filesystem::exists(dir / name.get<std::string>()));

  // the persisted table feeds later runs
  Config d;
  const auto table = (dir / j["artifacts"][1].get<std::string>()).string();
  REQUIRE(kz_config_set(d.p, "cutoff", "8") == KZ_OK);
  REQUIRE(kz_config_set(d.p, "table", table.c_str()) == KZ_OK);
  Report w;
  REQUIRE(kz_run("zeta-w", d.p, &w.p) == KZ_OK);
  CHECK(report_json(w.p)["results"]["table"]["classes"] == j["results"]["table"]["classes"]);
  std::filesystem::remove_all(dir);
}
