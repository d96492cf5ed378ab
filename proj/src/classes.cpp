#include "kzeta/classes.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "kzeta/enumerate.hpp"
#include "kzeta/reps.hpp"

namespace kz {

using nlohmann::json;

bool ClassRecord::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // smaller root wins so roots are the pool-order minimum
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent[y] = x;
  }
};

GaussianInt signed_trace(const GMat2& m) {
  const GaussianInt t = m.trace();
  return positive_sign(t) ? t : -t;
}

void add_flag(ClassRecord& r, const std::string& f) {
  if (!r.has_flag(f)) r.flags.push_back(f);
}

bool record_less(const ClassRecord& x, const ClassRecord& y) {
  if (x.norm != y.norm) return x.norm < y.norm;
  return x.rep < y.rep;
}

const std::vector<SubgroupDescriptor>& separating_quotients() {
  static const std::vector<SubgroupDescriptor> subs = [] {
    std::vector<SubgroupDescriptor> out;
    for (const GaussianInt pi : {GaussianInt{1, 1}, GaussianInt{2}, GaussianInt{2, 1}, GaussianInt{1, 2},
                                 GaussianInt{2, 2}, GaussianInt{3}, GaussianInt{3, 1}, GaussianInt{1, 3},
                                 GaussianInt{3, 2}, GaussianInt{2, 3}, GaussianInt{4}}) {
      out.push_back(SubgroupDescriptor::principal_congruence(pi));
    }
    return out;
  }();
  return subs;
}

}  // namespace

std::optional<GaussianInt> separating_modulus(const GMat2& x, const GMat2& y) {
  for (const auto& sub : separating_quotients()) {
    const std::size_t target = sub.coset_label(y);
    bool conjugate_here = false;
    for (const auto& a : sub.cosets()) {
      if (sub.coset_label(conjugate(a, x)) == target) {
        conjugate_here = true;
        break;
      }
    }
    if (!conjugate_here) return sub.modulus();
  }
  return std::nullopt;
}

namespace {

bool torsion_variants_share_trace(const ClassRecord& r) {
  const auto& c = r.centralizer;
  if (c.power != 1 || c.torsion_order < 2 || !c.torsion_generator) return false;
  GMat2 v = r.rep;
  for (int i = 1; i < c.torsion_order; ++i) {
    v = v * *c.torsion_generator;
    if (signed_trace(v) == r.trace) return true;
  }
  return false;
}

}  // namespace

bool ClassTable::operator==(const ClassTable& o) const { return table_to_json(*this) == table_to_json(o); }

ClassTable build_class_table(std::span<const GMat2> pool, double cutoff, std::int64_t height) {
  if (!(cutoff >= 1.0)) throw std::invalid_argument("build_class_table: cutoff must be >= 1");
  std::vector<GMat2> elems;
  for (const auto& g : pool) {
    if (!is_loxodromic(g)) continue;
    if (norm_from_trace(g.trace()) > cutoff) continue;
    elems.push_back(canonical(g));
  }
  std::sort(elems.begin(), elems.end(), pool_less);
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

  ClassTable table;
  table.height = height;
  table.cutoff = cutoff;
  table.diagnostics.elements = elems.size();
  if (elems.empty()) return table;

  std::unordered_map<GMat2, std::size_t, GMat2Hash> index;
  index.reserve(elems.size() * 2);
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);

  DisjointSets dsu(elems.size());
  const auto near = enumerate(1);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : near) {
      auto it = index.find(conjugate(g, elems[i]));
      if (it != index.end()) dsu.unite(i, it->second);
    }
  }

  auto roots_by_trace = [&]() {
    std::map<GaussianInt, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (dsu.find(i) == i) out[signed_trace(elems[i])].push_back(i);
    }
    return out;
  };

  // second pass: wider conjugators between components sharing a trace
  const auto far = enumerate(2);
  for (const auto& [trace, roots] : roots_by_trace()) {
    if (roots.size() < 2) continue;
    for (const std::size_t r : roots) {
      for (const auto& g : far) {
        auto it = index.find(conjugate(g, elems[r]));
        if (it != index.end()) dsu.unite(r, it->second);
      }
    }
  }

  std::vector<std::size_t> size(elems.size(), 0);
  for (std::size_t i = 0; i < elems.size(); ++i) ++size[dsu.find(i)];

  const auto buckets = roots_by_trace();
  for (const auto& [trace, roots] : buckets) {
    // components sharing a trace: certified distinct when some congruence
    // quotient separates them, otherwise flagged
    std::vector<bool> unresolved(roots.size(), false);
    for (std::size_t x = 0; x < roots.size(); ++x) {
      for (std::size_t y = x + 1; y < roots.size(); ++y) {
        if (!separating_modulus(elems[roots[x]], elems[roots[y]])) unresolved[x] = unresolved[y] = true;
      }
    }
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const std::size_t r = roots[k];
      ClassRecord rec;
      rec.rep = elems[r];
      rec.trace = trace;
      rec.norm = norm_from_trace(trace);
      rec.centralizer = centralizer_exact(rec.rep);
      rec.class_size = size[r];
      if (roots.size() > 1) add_flag(rec, "shares-trace");
      if (unresolved[k]) {
        add_flag(rec, "unresolved-conjugacy");
        ++table.diagnostics.unresolved;
      }
      if (torsion_variants_share_trace(rec)) add_flag(rec, "torsion-variants-share-trace");
      table.classes.push_back(std::move(rec));
    }
  }
  std::sort(table.classes.begin(), table.classes.end(), record_less);
  for (std::size_t k = 0; k < table.classes.size(); ++k) table.classes[k].parent = k;
  table.diagnostics.count_by_height.emplace_back(height, table.classes.size());
  return table;
}

ClassTable build_stable_table(double cutoff, std::int64_t h_start, std::int64_t h_max) {
  if (h_start < 1 || h_max < h_start) throw std::invalid_argument("build_stable_table: bad height range");
  std::vector<std::pair<std::int64_t, std::size_t>> history;
  ClassTable last;
  for (std::int64_t h = h_start; h <= h_max; ++h) {
    const auto pool = enumerate_loxodromic(h, cutoff);
    ClassTable t = build_class_table(pool, cutoff, h);
    history.emplace_back(h, t.classes.size());
    const bool stable = history.size() >= 2 && history[history.size() - 2].second == t.classes.size();
    last = std::move(t);
    if (stable) {
      last.diagnostics.stable = true;
      break;
    }
  }
  last.diagnostics.count_by_height = history;
  return last;
}

ClassTable split_classes(const ClassTable& table, const SubgroupDescriptor& sub) {
  ClassTable out;
  out.height = table.height;
  out.cutoff = table.cutoff;
  out.diagnostics = table.diagnostics;
  out.diagnostics.unresolved = 0;
  out.group.kind = sub.kind() == SubgroupDescriptor::Kind::Full ? "full" : "principal-congruence";
  out.group.modulus = sub.modulus();
  out.group.index = sub.index();
  if (sub.kind() == SubgroupDescriptor::Kind::Full) {
    out.classes = table.classes;
    out.diagnostics.unresolved = table.diagnostics.unresolved;
    for (std::size_t k = 0; k < out.classes.size(); ++k) out.classes[k].parent = k;
    return out;
  }

  const FiniteGroup g = quotient_group(sub);
  const auto& cos = sub.cosets();
  const MembershipFn member = [&sub](const GMat2& x) { return sub.contains(x); };
  for (std::size_t p = 0; p < table.classes.size(); ++p) {
    const ClassRecord& parent = table.classes[p];
    if (!sub.contains(parent.rep)) continue;
    std::vector<std::size_t> gens{sub.coset_label(parent.centralizer.primitive)};
    if (parent.centralizer.torsion_generator) gens.push_back(sub.coset_label(*parent.centralizer.torsion_generator));
    const auto h = g.generated_subgroup(gens);
    std::vector<bool> covered(g.order, false);
    for (std::size_t k = 0; k < g.order; ++k) {
      if (covered[k]) continue;
      for (const std::size_t x : h) covered[g.mul(k, x)] = true;
      ClassRecord rec;
      rec.rep = conjugate(cos[k], parent.rep);
      rec.trace = signed_trace(rec.rep);
      rec.norm = parent.norm;
      rec.centralizer = centralizer_exact(rec.rep, member);
      rec.class_size = parent.class_size;
      rec.parent = p;
      rec.coset = k;
      rec.flags = parent.flags;
      if (rec.has_flag("unresolved-conjugacy")) ++out.diagnostics.unresolved;
      out.classes.push_back(std::move(rec));
    }
  }
  std::sort(out.classes.begin(), out.classes.end(), record_less);
  return out;
}

std::size_t count_split_classes_by_search(const ClassTable& split, const SubgroupDescriptor& sub,
                                          std::int64_t pool_height) {
  std::vector<GMat2> conj;
  for (const auto& g : enumerate(pool_height)) {
    if (sub.contains(g) && !is_projective_identity(g)) conj.push_back(g);
  }
  std::unordered_map<GMat2, std::size_t, GMat2Hash> index;
  for (std::size_t i = 0; i < split.classes.size(); ++i) index.emplace(split.classes[i].rep, i);
  DisjointSets dsu(split.classes.size());
  for (std::size_t i = 0; i < split.classes.size(); ++i) {
    for (const auto& g : conj) {
      auto it = index.find(conjugate(g, split.classes[i].rep));
      if (it != index.end()) dsu.unite(i, it->second);
    }
  }
  std::size_t groups = 0;
  for (std::size_t i = 0; i < split.classes.size(); ++i) groups += dsu.find(i) == i;
  return groups;
}

// ---- JSON ----

namespace {

json gi_json(const GaussianInt& z) { return json::array({z.re, z.im}); }

json mat_json(const GMat2& m) {
  return json::array({json::array({gi_json(m.a), gi_json(m.b)}), json::array({gi_json(m.c), gi_json(m.d)})});
}

GaussianInt gi_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw TableParseError("expected [re, im]");
  return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()};
}

GMat2 mat_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j.at(0).is_array() || j.at(0).size() != 2 || j.at(1).size() != 2) {
    throw TableParseError("expected a 2x2 matrix [[a, b], [c, d]]");
  }
  return {gi_from(j[0][0]), gi_from(j[0][1]), gi_from(j[1][0]), gi_from(j[1][1])};
}

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string table_to_json(const ClassTable& t) {
  json j;
  j["version"] = kClassTableVersion;
  j["group"] = {{"kind", t.group.kind}, {"modulus", gi_json(t.group.modulus)}, {"index", t.group.index}};
  j["height"] = t.height;
  j["cutoff"] = t.cutoff;
  json classes = json::array();
  for (const auto& r : t.classes) {
    const auto& c = r.centralizer;
    json e;
    e["rep"] = mat_json(r.rep);
    e["N"] = r.norm;
    e["trace"] = gi_json(r.trace);
    e["m"] = c.torsion_order;
    e["power"] = c.power;
    e["primitive"] = mat_json(c.primitive);
    e["primitive_N"] = c.primitive_norm;
    e["torsion_generator"] = c.torsion_generator ? mat_json(*c.torsion_generator) : json(nullptr);
    e["zeta"] = json::array({c.zeta.real(), c.zeta.imag()});
    e["completeness"] = to_string(c.completeness);
    e["class_size"] = r.class_size;
    e["parent"] = r.parent;
    e["coset"] = r.coset;
    e["flags"] = r.flags;
    classes.push_back(std::move(e));
  }
  j["classes"] = std::move(classes);
  json by_height = json::array();
  for (const auto& [h, n] : t.diagnostics.count_by_height) by_height.push_back(json::array({h, n}));
  j["diagnostics"] = {{"elements", t.diagnostics.elements},
                      {"unresolved", t.diagnostics.unresolved},
                      {"count_by_height", by_height},
                      {"stable", t.diagnostics.stable}};
  return j.dump(1) + "\n";
}

ClassTable table_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TableParseError("class table: " + line_context(text, e.byte) + ": " + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version")) throw TableParseError("class table: missing version field");
    const int version = j.at("version").get<int>();
    if (version != kClassTableVersion) {
      throw SchemaVersionError("class table schema version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(kClassTableVersion) + ")");
    }
    ClassTable t;
    const auto& g = j.at("group");
    t.group.kind = g.at("kind").get<std::string>();
    t.group.modulus = gi_from(g.at("modulus"));
    t.group.index = g.at("index").get<std::size_t>();
    t.height = j.at("height").get<std::int64_t>();
    t.cutoff = j.at("cutoff").get<double>();
    std::size_t k = 0;
    for (const auto& e : j.at("classes")) {
      try {
        ClassRecord r;
        r.rep = mat_from(e.at("rep"));
        r.norm = e.at("N").get<double>();
        r.trace = gi_from(e.at("trace"));
        auto& c = r.centralizer;
        c.torsion_order = e.at("m").get<int>();
        c.power = e.at("power").get<int>();
        c.primitive = mat_from(e.at("primitive"));
        c.primitive_norm = e.at("primitive_N").get<double>();
        if (!e.at("torsion_generator").is_null()) c.torsion_generator = mat_from(e.at("torsion_generator"));
        c.zeta = {e.at("zeta").at(0).get<double>(), e.at("zeta").at(1).get<double>()};
        c.completeness = e.at("completeness").get<std::string>() == "complete" ? Completeness::Complete
                                                                               : Completeness::SearchBounded;
        r.class_size = e.at("class_size").get<std::size_t>();
        r.parent = e.at("parent").get<std::size_t>();
        r.coset = e.at("coset").get<std::size_t>();
        r.flags = e.at("flags").get<std::vector<std::string>>();
        if (r.rep.det() != GaussianInt{1}) throw TableParseError("representative has determinant != 1");
        t.classes.push_back(std::move(r));
      } catch (const TableParseError& err) {
        throw TableParseError("class table: classes[" + std::to_string(k) + "]: " + err.what());
      } catch (const json::exception& err) {
        throw TableParseError("class table: classes[" + std::to_string(k) + "]: " + err.what());
      }
      ++k;
    }
    if (j.contains("diagnostics")) {
      const auto& d = j.at("diagnostics");
      t.diagnostics.elements = d.at("elements").get<std::size_t>();
      t.diagnostics.unresolved = d.at("unresolved").get<std::size_t>();
      t.diagnostics.stable = d.at("stable").get<bool>();
      for (const auto& p : d.at("count_by_height"))
        t.diagnostics.count_by_height.emplace_back(p.at(0).get<std::int64_t>(), p.at(1).get<std::size_t>());
    }
    return t;
  } catch (const json::exception& e) {
    throw TableParseError(std::string("class table: ") + e.what());
  }
}

void write_table(const ClassTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw TableIOError("cannot open " + path + " for writing");
  os << table_to_json(t);
  if (!os) throw TableIOError("write to " + path + " failed");
}

ClassTable read_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw TableIOError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return table_from_json(ss.str());
}

}  // namespace kz
