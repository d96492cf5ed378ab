#include "kzeta/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kzeta/classes.hpp"
#include "kzeta/cusps.hpp"
#include "kzeta/enumerate.hpp"
#include "kzeta/reps.hpp"
#include "kzeta/zeta.hpp"

namespace kz {

using nlohmann::json;

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::string modulus_text(const std::optional<GaussianInt>& pi) {
  return pi ? std::to_string(pi->re) + "," + std::to_string(pi->im) : "full";
}

// shortest round-trip form
std::string number_text(double x) {
  if (x == std::round(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
  return json(x).dump();
}

std::string complex_text(cplx z) { return number_text(z.real()) + "," + number_text(z.imag()); }

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return number_text(v.get<double>());
  throw ConfigError("config value must be a string or a number: " + v.dump());
}

// ---------------------------------------------------------------------------
// Checks and session state

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

json check_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

struct Quotient {
  SubgroupDescriptor sub;
  FiniteGroup g;
  CharacterTable table;
  std::vector<UnitaryRep> irreps;  // pullbacks to Gamma with matrices
};

class Session {
 public:
  explicit Session(const RunConfig& c) : c_(c) {}

  const RunConfig& config() const { return c_; }

  double tol(double fallback) const { return c_.tol.value_or(fallback); }

  bool is_full() const { return !c_.pi || c_.pi->is_unit(); }

  const SubgroupDescriptor& sub() {
    if (!sub_) sub_ = is_full() ? SubgroupDescriptor::full() : SubgroupDescriptor::principal_congruence(*c_.pi);
    return *sub_;
  }

  std::string group_name() { return is_full() ? "PSL(2, Z[i])" : sub().describe(); }

  const ClassTable& full_table() {
    if (!table_) {
      if (!c_.table.empty()) {
        table_ = read_table(c_.table);
        if (table_->group.kind != "full") throw ConfigError(c_.table + ": expected a table of the full group");
        if (table_->cutoff != c_.cutoff) throw ConfigError(c_.table + ": cutoff differs from the configured cutoff");
      } else {
        table_ = build_stable_table(c_.cutoff, c_.height, c_.height_max);
      }
    }
    return *table_;
  }

  const ClassTable& split_table() {
    if (!split_) split_ = split_classes(full_table(), sub());
    return *split_;
  }

  const Quotient& quotient() {
    if (!quotient_) {
      Quotient q{sub(), quotient_group(sub()), {}, {}};
      q.table = character_table(q.g);
      for (std::size_t k = 0; k < q.table.irreducibles.size(); ++k) {
        const auto& chi = q.table.irreducibles[k];
        q.irreps.push_back(pullback_irrep(q.sub, q.g, chi, irrep_matrices(q.g, chi), "theta" + std::to_string(k)));
      }
      quotient_ = std::move(q);
    }
    return *quotient_;
  }

  // Representations of Gamma_1: trivial, then the restricted pullbacks
  std::vector<UnitaryRep> sub_reps() {
    std::vector<UnitaryRep> out{trivial_rep(1, is_full() ? RepDomain::Gamma : RepDomain::Gamma1)};
    if (is_full()) return out;
    for (const auto& r : quotient().irreps) {
      if (r.dim > 1) {
        auto res = restrict_rep(r);
        res.name = "restricted " + r.name;
        out.push_back(std::move(res));
      }
    }
    return out;
  }

  std::string write_artifact(const std::string& name, const std::string& content) {
    if (c_.out.empty()) return {};
    std::filesystem::create_directories(c_.out);
    const auto path = std::filesystem::path(c_.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TableIOError("cannot write " + path.string());
    f << content;
    if (!f) throw TableIOError("write failed for " + path.string());
    return name;
  }

 private:
  RunConfig c_;
  std::optional<SubgroupDescriptor> sub_;
  std::optional<ClassTable> table_, split_;
  std::optional<Quotient> quotient_;
};

struct Outcome {
  json results = json::object();
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
};

json table_summary(const ClassTable& t) {
  json by_height = json::array();
  for (const auto& [h, n] : t.diagnostics.count_by_height) by_height.push_back({{"height", h}, {"classes", n}});
  std::size_t flagged = 0;
  for (const auto& r : t.classes) flagged += !r.flags.empty();
  return {{"group", t.group.kind},     {"modulus", modulus_text(t.group.modulus)},
          {"index", t.group.index},    {"height", t.height},
          {"cutoff", t.cutoff},        {"classes", t.classes.size()},
          {"flagged", flagged},        {"unresolved", t.diagnostics.unresolved},
          {"stable", t.diagnostics.stable}, {"count_by_height", by_height}};
}

json class_rows(const ClassTable& t) {
  json rows = json::array();
  for (const auto& r : t.classes) {
    rows.push_back({{"rep", to_string(r.rep)},
                    {"norm", r.norm},
                    {"trace", to_string(r.trace)},
                    {"torsion_order", r.centralizer.torsion_order},
                    {"power", r.centralizer.power},
                    {"flags", r.flags}});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_enumerate(Session& ss) {
  Outcome o;
  const auto& c = ss.config();
  const auto& t = ss.full_table();
  const auto lox = enumerate_loxodromic(t.height, c.cutoff);
  o.results["pool"] = {{"height", c.height}, {"elements", enumerate(c.height).size()}};
  o.results["loxodromic"] = {{"height", t.height}, {"elements", lox.size()}};
  o.results["table"] = table_summary(t);
  const auto hash = config_hash(c);
  std::ostringstream pool;
  pool << "a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im\n";
  for (const auto& g : lox) {
    pool << g.a.re << ',' << g.a.im << ',' << g.b.re << ',' << g.b.im << ',' << g.c.re << ',' << g.c.im << ','
         << g.d.re << ',' << g.d.im << '\n';
  }
  for (const auto& name : {ss.write_artifact("pool-" + hash + ".csv", pool.str()),
                           ss.write_artifact("table-" + hash + ".json", table_to_json(t))}) {
    if (!name.empty()) o.artifacts.push_back(name);
  }
  if (!ss.is_full()) {
    const auto& split = ss.split_table();
    o.results["split"] = table_summary(split);
    const auto name = ss.write_artifact("table-split-" + hash + ".json", table_to_json(split));
    if (!name.empty()) o.artifacts.push_back(name);
  }
  return o;
}

Outcome cmd_classes(Session& ss) {
  Outcome o;
  const auto& t = ss.is_full() ? ss.full_table() : ss.split_table();
  o.results["table"] = table_summary(t);
  o.results["classes"] = class_rows(t);
  return o;
}

std::vector<UnitaryRep> gamma_reps(Session& ss) {
  std::vector<UnitaryRep> reps{trivial_rep()};
  reps.front().name = "trivial";
  if (!ss.is_full()) {
    const auto& q = ss.quotient();
    reps.insert(reps.end(), q.irreps.begin(), q.irreps.end());
  }
  return reps;
}

Outcome cmd_zeta_w(Session& ss) {
  Outcome o;
  const auto& t = ss.full_table();
  json rows = json::array();
  for (const auto& chi : gamma_reps(ss)) {
    for (const auto s : ss.config().s) {
      const auto w = W(s, t, chi);
      rows.push_back({{"rep", chi.name},
                      {"dim", chi.dim},
                      {"s", cjson(s)},
                      {"value", cjson(w.value)},
                      {"cutoff", w.cutoff},
                      {"tail_estimate", w.tail_estimate},
                      {"mode", to_string(w.mode)},
                      {"flagged", w.flagged}});
    }
  }
  o.results["table"] = table_summary(t);
  o.results["W"] = rows;
  return o;
}

Outcome cmd_zeta_z(Session& ss) {
  Outcome o;
  const auto& t = ss.full_table();
  const double tol = ss.tol(1e-6);
  json rows = json::array();
  for (const auto& chi : gamma_reps(ss)) {
    const auto w = w_series(t, chi, WMode::PrimitivePowers);
    for (const auto s : ss.config().s) {
      const cplx euler = log_Z_euler(s, t, chi);
      const auto zw = Z_from_W(s, w);
      const double diff = std::abs(euler - zw.log_value);
      rows.push_back({{"rep", chi.name},
                      {"s", cjson(s)},
                      {"log_Z_euler", cjson(euler)},
                      {"log_Z_from_W", cjson(zw.log_value)},
                      {"Z_euler", cjson(std::exp(euler))},
                      {"quadrature_error", zw.quadrature_error},
                      {"difference", diff}});
      o.checks.push_back({"euler vs integrated W, " + chi.name + ", s = " + complex_text(s), diff, tol, diff <= tol});
    }
    o.results["overflow_stops"][chi.name] = w.overflow_stops;
  }
  o.results["Z"] = rows;
  o.results["Z_euler_10_minus_1"] = std::real(Z_euler(cplx(10), t, trivial_rep())) - 1.0;
  return o;
}

Outcome cmd_verify_factorization(Session& ss) {
  Outcome o;
  const double tol = ss.tol(1e-9);
  const auto& full = ss.full_table();
  const auto& split = ss.split_table();
  json rows = json::array();
  for (const auto& chi : ss.sub_reps()) {
    const auto u = induce(chi, ss.sub()).as_rep();
    for (const auto s : ss.config().s) {
      const cplx lhs = W(s, split, chi).value;
      const cplx rhs = W(s, full, u).value;
      const double diff = std::abs(lhs - rhs);
      rows.push_back({{"rep", chi.name}, {"s", cjson(s)}, {"W_sub", cjson(lhs)}, {"W_induced", cjson(rhs)}, {"difference", diff}});
      o.checks.push_back({"factorization, " + chi.name + ", s = " + complex_text(s), diff, tol, diff <= tol});
    }
  }
  o.results["full"] = table_summary(full);
  o.results["split"] = table_summary(split);
  o.results["W"] = rows;
  return o;
}

Outcome cmd_verify_product(Session& ss) {
  Outcome o;
  const double tol = ss.tol(1e-12);
  const auto& t = ss.full_table();
  json rows = json::array();
  std::vector<UnitaryRep> irreps{trivial_rep()};
  std::vector<int> degrees{1};
  double ortho = 0;
  if (!ss.is_full()) {
    const auto& q = ss.quotient();
    irreps = q.irreps;
    degrees.clear();
    for (const auto& chi : q.table.irreducibles) degrees.push_back(chi.degree);
    ortho = q.table.max_orthogonality_error;
  }
  const auto u = induce(trivial_rep(1, ss.is_full() ? RepDomain::Gamma : RepDomain::Gamma1), ss.sub()).as_rep();
  for (const auto s : ss.config().s) {
    const cplx lhs = W(s, t, u).value;
    cplx rhs = 0;
    for (std::size_t k = 0; k < irreps.size(); ++k) rhs += static_cast<double>(degrees[k]) * W(s, t, irreps[k]).value;
    const double diff = std::abs(lhs - rhs);
    rows.push_back({{"s", cjson(s)}, {"W_induced", cjson(lhs)}, {"W_irreducible_sum", cjson(rhs)}, {"difference", diff}});
    o.checks.push_back({"product formula, s = " + complex_text(s), diff, tol, diff <= tol});
  }
  int sum_sq = 0;
  for (int d : degrees) sum_sq += d * d;
  o.checks.push_back({"sum of squared degrees", static_cast<double>(sum_sq), static_cast<double>(ss.sub().index()),
                      static_cast<std::size_t>(sum_sq) == ss.sub().index()});
  o.checks.push_back({"character orthogonality", ortho, 1e-10, ortho <= 1e-10});
  o.results["degrees"] = degrees;
  o.results["table"] = table_summary(t);
  o.results["W"] = rows;
  return o;
}

json cusp_json(const CuspData& c) {
  return {{"p", to_string(c.p)},
          {"q", to_string(c.q)},
          {"conjugator", to_string(c.conjugator)},
          {"lattice", {to_string(c.lattice[0]), to_string(c.lattice[1])}},
          {"tau", cjson(c.tau)},
          {"epsilon", cjson(c.epsilon)},
          {"epsilon_order", c.epsilon_order},
          {"parabolic_index", c.parabolic_index}};
}

json singularity_json(const SingularityReport& r) {
  json per = json::array();
  for (const auto& c : r.cusps) {
    per.push_back({{"k", c.k}, {"k_prime", c.k_prime}, {"contained", c.contained}, {"well_separated", c.well_separated}});
  }
  return {{"group", r.group}, {"dim", r.dim}, {"kappa", r.kappa}, {"total", r.total}, {"clean", r.clean}, {"cusps", per}};
}

Outcome cmd_cusps(Session& ss) {
  Outcome o;
  json cusps = json::array();
  for (const auto& c : cusp_classes(ss.sub())) cusps.push_back(cusp_json(c));
  o.results["group"] = ss.group_name();
  o.results["cusps"] = cusps;
  std::vector<std::pair<SubgroupDescriptor, UnitaryRep>> cases{{SubgroupDescriptor::full(), trivial_rep()}};
  cases.front().second.name = "trivial";
  if (!ss.is_full()) {
    for (auto& chi : ss.sub_reps()) cases.emplace_back(ss.sub(), std::move(chi));
  }
  json rows = json::array();
  for (const auto& [sub, chi] : cases) {
    const auto r = verify_k_invariant(sub, chi);
    const std::string label = sub.describe() + ", " + chi.name;
    rows.push_back({{"case", label}, {"sub", singularity_json(r.sub_side)}, {"induced", singularity_json(r.induced_side)}});
    const double gap = std::abs(r.sub_side.total - r.induced_side.total);
    o.checks.push_back({"k invariant, " + label, gap, 0, r.equal});
    o.checks.push_back({"separation clean, " + label, 0, 0, r.sub_side.clean && r.induced_side.clean});
  }
  o.results["k_invariant"] = rows;
  return o;
}

Outcome cmd_shc(Session& ss) {
  Outcome o;
  const double tol = ss.tol(1e-8);
  double worst = 0;
  json grid = json::array();
  for (const double s0 : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    const PointPairFn k = [s0](double d) { return kernel_ks(cplx(s0), d); };
    for (const double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const auto h = shc_transform(k, cplx(1 + t * t));
      const double err = std::abs(h.value - 1.0 / (s0 * s0 + t * t));
      worst = std::max(worst, err);
      grid.push_back({{"s0", s0}, {"t", t}, {"transform", cjson(h.value)}, {"error", err}});
    }
  }
  o.checks.push_back({"resolvent kernel transform grid", worst, tol, worst <= tol});
  json pairs = json::array();
  for (const double r : {0.5, 1.0, 2.0}) {
    const auto pair = gaussian_pair(r);
    double fourier = 0, back = 0;
    for (const double x : {0.0, 1.0, 2.0}) fourier = std::max(fourier, std::abs(fourier_partner(pair, x).value - pair.g(x)));
    const PointPairFn k = [&](double d) { return cplx(pair.k(d)); };
    for (const double t : {0.0, 1.0, 2.5}) {
      back = std::max(back, std::abs(shc_transform(k, cplx(1 + t * t)).value - pair.h(cplx(1 + t * t))));
    }
    pairs.push_back({{"r", r}, {"fourier_error", fourier}, {"transform_error", back}, {"convention", pair.convention}});
    o.checks.push_back({"gaussian pair fourier, r = " + number_text(r), fourier, tol, fourier <= tol});
    o.checks.push_back({"gaussian pair transform, r = " + number_text(r), back, tol, back <= tol});
  }
  o.results["grid"] = grid;
  o.results["gaussian_pairs"] = pairs;
  return o;
}

Outcome cmd_unfold(Session& ss) {
  Outcome o;
  const auto& c = ss.config();
  const double tol = ss.tol(0.02);
  const auto theta = enumerate_loxodromic_near(c.cutoff, c.delta_max);
  SamplePlan lhs, rhs;
  lhs.seed = c.seed;
  rhs.seed = c.seed + 0x9E3779B97F4A7C15ULL;
  lhs.count = rhs.count = c.samples;
  lhs.cusp_height = rhs.cusp_height = c.cusp_height;
  const auto chi = trivial_rep(1, ss.is_full() ? RepDomain::Gamma : RepDomain::Gamma1);
  const cplx s = c.s.front();
  const auto r = verify_unfolding(theta, c.cutoff, chi, ss.sub(), lhs, rhs, s, c.delta_max);
  o.results["unfolding"] = {{"cutoff", r.cutoff},
                            {"delta_max", r.delta_max},
                            {"cusp_height", c.cusp_height},
                            {"samples", r.samples},
                            {"theta", r.theta},
                            {"theta1", r.theta1},
                            {"lhs_terms", r.lhs_terms},
                            {"rhs_terms", r.rhs_terms},
                            {"s", cjson(r.s)},
                            {"lhs", cjson(r.lhs)},
                            {"rhs", cjson(r.rhs)},
                            {"lhs_stderr", r.lhs_stderr},
                            {"rhs_stderr", r.rhs_stderr},
                            {"z", r.z},
                            {"relative_difference", r.relative_difference},
                            {"excluded", r.excluded}};
  o.checks.push_back({"unfolding z-score", r.z, 3.0, r.z <= 3.0});
  o.checks.push_back({"unfolding relative difference", r.relative_difference, tol, r.relative_difference <= tol});
  return o;
}

using Command = std::function<Outcome(Session&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m{
      {"enumerate", cmd_enumerate},
      {"classes", cmd_classes},
      {"zeta-w", cmd_zeta_w},
      {"zeta-z", cmd_zeta_z},
      {"verify-factorization", cmd_verify_factorization},
      {"verify-product", cmd_verify_product},
      {"cusps", cmd_cusps},
      {"shc", cmd_shc},
      {"unfold", cmd_unfold},
  };
  return m;
}

bool needs_zeta_s(const std::string& cmd) { return cmd != "enumerate" && cmd != "classes" && cmd != "cusps" && cmd != "shc"; }

}  // namespace

// ---------------------------------------------------------------------------
// Config

std::optional<GaussianInt> parse_modulus(const std::string& text) {
  if (text == "full") return std::nullopt;
  const cplx z = parse_complex(text);
  if (z.real() != std::round(z.real()) || z.imag() != std::round(z.imag())) {
    throw ConfigError("pi: expected a Gaussian integer, got '" + text + "'");
  }
  const GaussianInt g{static_cast<std::int64_t>(z.real()), static_cast<std::int64_t>(z.imag())};
  if (g.is_zero()) throw ConfigError("pi: modulus must be nonzero");
  return g;
}

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return cplx(parse_double("complex", text), 0);
  return cplx(parse_double("complex", text.substr(0, comma)), parse_double("complex", text.substr(comma + 1)));
}

void config_set(RunConfig& c, const std::string& key, const std::string& v) {
  auto positive_int = [&](std::int64_t& field) {
    const auto x = parse_int(key, v);
    if (x <= 0) throw ConfigError(key + ": must be positive");
    field = x;
  };
  auto positive_double = [&](double& field) {
    const auto x = parse_double(key, v);
    if (!(x > 0) || !std::isfinite(x)) throw ConfigError(key + ": must be positive");
    field = x;
  };
  if (key == "pi" || key == "group.pi") {
    c.pi = parse_modulus(v);
  } else if (key == "height" || key == "enumeration.height") {
    positive_int(c.height);
  } else if (key == "height_max" || key == "enumeration.height_max") {
    positive_int(c.height_max);
  } else if (key == "cutoff" || key == "enumeration.cutoff") {
    positive_double(c.cutoff);
  } else if (key == "table" || key == "enumeration.table") {
    c.table = v;
  } else if (key == "s" || key == "zeta.s") {
    if (v.empty()) {
      c.s.clear();
    } else {
      c.s.push_back(parse_complex(v));
    }
  } else if (key == "samples" || key == "sampling.samples") {
    std::int64_t n = 0;
    positive_int(n);
    c.samples = static_cast<std::uint64_t>(n);
  } else if (key == "seed" || key == "sampling.seed") {
    const auto x = parse_int(key, v);
    if (x < 0) throw ConfigError(key + ": must be non-negative");
    c.seed = static_cast<std::uint64_t>(x);
  } else if (key == "cusp_height" || key == "sampling.cusp_height") {
    positive_double(c.cusp_height);
  } else if (key == "delta_max" || key == "sampling.delta_max") {
    positive_double(c.delta_max);
  } else if (key == "tol" || key == "checks.tol") {
    double t = 0;
    positive_double(t);
    c.tol = t;
  } else if (key == "out" || key == "output.dir") {
    c.out = v;
  } else if (key == "format" || key == "output.format") {
    if (v != "json" && v != "csv") throw ConfigError("format: expected json or csv, got '" + v + "'");
    c.format = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a json object");
  RunConfig c;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const std::string dotted = section + "." + key;
      if (dotted == "zeta.s") {
        if (!value.is_array()) throw ConfigError("zeta.s must be an array");
        c.s.clear();
        for (const auto& v : value) c.s.push_back(parse_complex(scalar_text(v)));
      } else if (dotted == "checks.tol" && value.is_null()) {
        c.tol.reset();
      } else {
        config_set(c, dotted, scalar_text(value));
      }
    }
  }
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json s = json::array();
  for (const auto z : c.s) s.push_back(complex_text(z));
  return {{"group", {{"pi", modulus_text(c.pi)}}},
          {"enumeration", {{"height", c.height}, {"height_max", c.height_max}, {"cutoff", c.cutoff}, {"table", c.table}}},
          {"zeta", {{"s", s}}},
          {"sampling",
           {{"samples", c.samples}, {"seed", c.seed}, {"cusp_height", c.cusp_height}, {"delta_max", c.delta_max}}},
          {"checks", {{"tol", c.tol ? json(*c.tol) : json(nullptr)}}},
          {"output", {{"dir", c.out}, {"format", c.format}}}};
}

void validate(const RunConfig& c) {
  if (c.height > c.height_max) throw ConfigError("height exceeds height_max");
  if (c.cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (c.cusp_height <= 1) throw ConfigError("cusp_height must exceed 1");
  if (c.delta_max <= 1) throw ConfigError("delta_max must exceed 1");
  if (c.s.empty()) throw ConfigError("at least one s value is required");
}

std::string config_hash(const RunConfig& c) {
  // the output directory does not change the results
  json j = config_to_json(c);
  j["output"].erase("dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// Runs

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : commands()) n.push_back(k);
    n.push_back("all");
    return n;
  }();
  return names;
}

RunResult run_command(const std::string& command, const RunConfig& c) {
  validate(c);
  std::vector<std::string> steps;
  if (command == "all") {
    steps = {"enumerate", "verify-factorization", "verify-product", "zeta-z", "cusps", "shc", "unfold"};
  } else if (commands().count(command)) {
    steps = {command};
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  for (const auto& step : steps) {
    if (!needs_zeta_s(step)) continue;
    for (const auto s : c.s) {
      if (!(s.real() > 1)) throw ConfigError("s = " + complex_text(s) + ": zeta commands require Re s > 1");
    }
  }

  Session ss(c);
  RunResult out;
  json checks = json::array(), results = json::object(), artifacts = json::array();
  for (const auto& step : steps) {
    const Outcome o = commands().at(step)(ss);
    for (const auto& ch : o.checks) {
      json cj = check_json(ch);
      if (steps.size() > 1) cj["command"] = step;
      checks.push_back(cj);
      out.pass = out.pass && ch.pass;
    }
    if (steps.size() > 1) {
      results[step] = o.results;
    } else {
      results = o.results;
    }
    for (const auto& a : o.artifacts) artifacts.push_back(a);
  }
  out.report = {{"schema", "kzeta-report"},
                {"version", kReportVersion},
                {"code_version", kVersion},
                {"command", command},
                {"config", config_to_json(c)},
                {"config_hash", config_hash(c)},
                {"verdict", out.pass ? "pass" : "fail"},
                {"checks", checks},
                {"results", results},
                {"artifacts", artifacts}};
  return out;
}

std::string report_text(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format != "csv") throw ConfigError("format: expected json or csv, got '" + format + "'");
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (const char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << "command,check,value,tolerance,pass\n";
  for (const auto& c : report.at("checks")) {
    os << quote(c.value("command", report.at("command").get<std::string>())) << ',' << quote(c.at("name").get<std::string>())
       << ',' << c.at("value").dump() << ',' << c.at("tolerance").dump() << ','
       << (c.at("pass").get<bool>() ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace kz
