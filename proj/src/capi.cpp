#include "kzeta.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "kzeta/classes.hpp"
#include "kzeta/cusps.hpp"
#include "kzeta/h3.hpp"
#include "kzeta/pipeline.hpp"
#include "kzeta/reps.hpp"
#include "kzeta/zeta.hpp"

struct kz_config {
  kz::RunConfig value;
};

struct kz_report {
  kz::RunResult result;
};

namespace {

thread_local std::string last_error;

kz_status fail(kz_status s, const std::string& what) {
  last_error = what;
  return s;
}

// Most specific types first.
kz_status translate() {
  try {
    throw;
  } catch (const kz::ConfigError& e) {
    return fail(KZ_INVALID_ARGUMENT, e.what());
  } catch (const kz::TableParseError& e) {
    return fail(KZ_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(KZ_PARSE, e.what());
  } catch (const kz::SchemaVersionError& e) {
    return fail(KZ_SCHEMA_VERSION, e.what());
  } catch (const kz::TableIOError& e) {
    return fail(KZ_IO, e.what());
  } catch (const std::overflow_error& e) {
    return fail(KZ_OVERFLOW, e.what());
  } catch (const std::domain_error& e) {
    return fail(KZ_DOMAIN, e.what());
  } catch (const kz::QuadratureError& e) {
    return fail(KZ_NUMERIC, e.what());
  } catch (const kz::EigenSeparationError& e) {
    return fail(KZ_NUMERIC, e.what());
  } catch (const kz::ReductionError& e) {
    return fail(KZ_NUMERIC, e.what());
  } catch (const kz::TilingError& e) {
    return fail(KZ_NUMERIC, e.what());
  } catch (const kz::CuspError& e) {
    return fail(KZ_NUMERIC, e.what());
  } catch (const kz::CapabilityError& e) {
    return fail(KZ_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(KZ_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(KZ_INTERNAL, e.what());
  } catch (...) {
    return fail(KZ_INTERNAL, "unknown exception");
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

kz_status emit(const std::string& s, char** out) {
  *out = copy_out(s);
  return *out ? KZ_OK : fail(KZ_INTERNAL, "out of memory");
}

#define KZ_REQUIRE(ptr) \
  if (!(ptr)) return fail(KZ_INVALID_ARGUMENT, #ptr " is null")

}  // namespace

extern "C" {

const char* kz_version(void) { return kz::kVersion; }

const char* kz_last_error(void) { return last_error.c_str(); }

const char* kz_status_name(kz_status status) {
  switch (status) {
    case KZ_OK: return "ok";
    case KZ_INVALID_ARGUMENT: return "invalid-argument";
    case KZ_DOMAIN: return "domain";
    case KZ_OVERFLOW: return "overflow";
    case KZ_PARSE: return "parse";
    case KZ_SCHEMA_VERSION: return "schema-version";
    case KZ_IO: return "io";
    case KZ_NUMERIC: return "numeric";
    case KZ_INTERNAL: return "internal";
  }
  return "unknown";
}

void kz_string_free(char* s) { std::free(s); }

kz_status kz_config_new(kz_config** out) {
  KZ_REQUIRE(out);
  try {
    *out = new kz_config{};
    return KZ_OK;
  } catch (...) {
    return translate();
  }
}

void kz_config_free(kz_config* config) { delete config; }

kz_status kz_config_load_json(kz_config* config, const char* json) {
  KZ_REQUIRE(config);
  KZ_REQUIRE(json);
  try {
    config->value = kz::config_from_json(nlohmann::json::parse(json));
    return KZ_OK;
  } catch (...) {
    return translate();
  }
}

kz_status kz_config_set(kz_config* config, const char* key, const char* value) {
  KZ_REQUIRE(config);
  KZ_REQUIRE(key);
  KZ_REQUIRE(value);
  try {
    kz::RunConfig next = config->value;
    kz::config_set(next, key, value);
    config->value = std::move(next);
    return KZ_OK;
  } catch (...) {
    return translate();
  }
}

kz_status kz_config_to_json(const kz_config* config, char** out) {
  KZ_REQUIRE(config);
  KZ_REQUIRE(out);
  try {
    return emit(kz::config_to_json(config->value).dump(2), out);
  } catch (...) {
    return translate();
  }
}

kz_status kz_config_hash(const kz_config* config, char** out) {
  KZ_REQUIRE(config);
  KZ_REQUIRE(out);
  try {
    return emit(kz::config_hash(config->value), out);
  } catch (...) {
    return translate();
  }
}

const char* kz_commands(void) {
  static const std::string joined = [] {
    std::string s;
    for (const auto& c : kz::command_names()) s += (s.empty() ? "" : " ") + c;
    return s;
  }();
  return joined.c_str();
}

kz_status kz_run(const char* command, const kz_config* config, kz_report** out) {
  KZ_REQUIRE(command);
  KZ_REQUIRE(config);
  KZ_REQUIRE(out);
  *out = nullptr;
  try {
    *out = new kz_report{kz::run_command(command, config->value)};
    return KZ_OK;
  } catch (...) {
    return translate();
  }
}

void kz_report_free(kz_report* report) { delete report; }

kz_status kz_report_verdict(const kz_report* report, int* pass) {
  KZ_REQUIRE(report);
  KZ_REQUIRE(pass);
  *pass = report->result.pass ? 1 : 0;
  return KZ_OK;
}

kz_status kz_report_text(const kz_report* report, const char* format, char** out) {
  KZ_REQUIRE(report);
  KZ_REQUIRE(format);
  KZ_REQUIRE(out);
  try {
    return emit(kz::report_text(report->result.report, format), out);
  } catch (...) {
    return translate();
  }
}

kz_status kz_report_checks(const kz_report* report, int* total, int* failed) {
  KZ_REQUIRE(report);
  KZ_REQUIRE(total);
  KZ_REQUIRE(failed);
  *total = *failed = 0;
  for (const auto& c : report->result.report.at("checks")) {
    ++*total;
    *failed += !c.at("pass").get<bool>();
  }
  return KZ_OK;
}

}  // extern "C"
