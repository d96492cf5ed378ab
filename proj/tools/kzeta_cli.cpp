// kzeta command-line tool. Links only the C API.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kzeta.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Flags {
  std::string config;
  std::optional<std::string> pi, height, height_max, cutoff, samples, seed, tol, out, format, table;
  std::vector<std::string> s;
};

struct Failure {
  std::string what;
};

void check(kz_status st) {
  if (st != KZ_OK) throw Failure{std::string(kz_status_name(st)) + ": " + kz_last_error()};
}

std::string take(char* p) {
  std::string s(p ? p : "");
  kz_string_free(p);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{"io: cannot read " + path};
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Reports are never overwritten: an identical file is kept, a different one
// gets the next free numeric suffix.
std::string write_report(const std::filesystem::path& dir, const std::string& stem, const std::string& ext,
                         const std::string& text) {
  std::filesystem::create_directories(dir);
  for (int k = 0;; ++k) {
    const auto path = dir / (stem + (k ? "." + std::to_string(k) : "") + "." + ext);
    if (std::filesystem::exists(path)) {
      if (read_file(path.string()) == text) return path.string();
      continue;
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Failure{"io: cannot write " + path.string()};
    return path.string();
  }
}

int run(const std::string& command, const Flags& flags) {
  kz_config* raw = nullptr;
  check(kz_config_new(&raw));
  std::unique_ptr<kz_config, decltype(&kz_config_free)> cfg(raw, kz_config_free);

  if (!flags.config.empty()) check(kz_config_load_json(cfg.get(), read_file(flags.config).c_str()));
  // precedence: flag, config file, environment
  if (!flags.out) {
    const auto current = nlohmann::json::parse(take([&] {
      char* p = nullptr;
      check(kz_config_to_json(cfg.get(), &p));
      return p;
    }()));
    const char* env = std::getenv("KZETA_OUT");
    if (current["output"]["dir"].get<std::string>().empty() && env && *env) check(kz_config_set(cfg.get(), "out", env));
  }
  const std::pair<const char*, const std::optional<std::string>*> scalars[] = {
      {"pi", &flags.pi},         {"height", &flags.height}, {"height_max", &flags.height_max},
      {"cutoff", &flags.cutoff}, {"samples", &flags.samples}, {"seed", &flags.seed},
      {"tol", &flags.tol},       {"out", &flags.out},       {"format", &flags.format},
      {"table", &flags.table}};
  for (const auto& [key, value] : scalars) {
    if (*value) check(kz_config_set(cfg.get(), key, (*value)->c_str()));
  }
  if (!flags.s.empty()) {
    check(kz_config_set(cfg.get(), "s", ""));
    for (const auto& s : flags.s) check(kz_config_set(cfg.get(), "s", s.c_str()));
  }

  const auto config = nlohmann::json::parse(take([&] {
    char* p = nullptr;
    check(kz_config_to_json(cfg.get(), &p));
    return p;
  }()));
  const std::string format = config["output"]["format"].get<std::string>();
  const std::string dir = config["output"]["dir"].get<std::string>();

  kz_report* rep_raw = nullptr;
  check(kz_run(command.c_str(), cfg.get(), &rep_raw));
  std::unique_ptr<kz_report, decltype(&kz_report_free)> rep(rep_raw, kz_report_free);

  char* text_raw = nullptr;
  check(kz_report_text(rep.get(), format.c_str(), &text_raw));
  const std::string text = take(text_raw);
  char* hash_raw = nullptr;
  check(kz_config_hash(cfg.get(), &hash_raw));
  const std::string hash = take(hash_raw);

  int pass = 0, total = 0, failed = 0;
  check(kz_report_verdict(rep.get(), &pass));
  check(kz_report_checks(rep.get(), &total, &failed));
  if (dir.empty()) {
    std::cout << text;
  } else {
    const auto path = write_report(dir, command + "-" + hash, format, text);
    std::cout << path << "\n";
  }
  std::cerr << command << ": " << (pass ? "pass" : "fail") << " (" << total - failed << "/" << total << " checks)\n";
  return pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selberg zeta functions, induced representations and cusp invariants of PSL(2, Z[i])"};
  app.set_version_flag("--version", std::string(kz_version()));
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  std::istringstream names(kz_commands());
  for (std::string name; names >> name;) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "json config file (nested sections); flags override it")
        ->check(CLI::ExistingFile);
    sub->add_option("--pi", flags.pi, "generator of the congruence ideal, \"re,im\", or \"full\"");
    sub->add_option("--height", flags.height, "first search height H");
    sub->add_option("--height-max", flags.height_max, "last search height");
    sub->add_option("--cutoff", flags.cutoff, "norm cutoff X");
    sub->add_option("--s", flags.s, "spectral parameter \"re,im\" (repeatable)");
    sub->add_option("--samples", flags.samples, "Monte Carlo samples per side");
    sub->add_option("--seed", flags.seed, "sampling seed");
    sub->add_option("--tol", flags.tol, "tolerance for every check of the command");
    sub->add_option("--table", flags.table, "persisted full-group class table to load");
    sub->add_option("--out", flags.out, "report and artifact directory (default $KZETA_OUT, else stdout)");
    sub->add_option("--format", flags.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    return run(chosen, flags);
  } catch (const Failure& f) {
    std::cerr << "kzeta: " << f.what << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "kzeta: internal: " << e.what() << "\n";
    return kExitError;
  }
}
