#pragma once

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "galois/extension.hpp"
#include "galois/galois.hpp"
#include "galois/kummer.hpp"
#include "galois/units.hpp"

namespace galois {

struct Location {
  int line = 0;  // 1-based, 0 = unknown
  int column = 0;
};

/// Error carrying a source position.
class FormatError : public Error {
 public:
  FormatError(ErrorCode c, const std::string& what, Location loc)
      : Error(c, loc.line ? "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column) + ": " + what : what),
        loc_(loc) {}
  const Location& location() const { return loc_; }

 private:
  Location loc_;
};

struct UnitsSection {
  std::vector<std::string> generators;
  std::vector<long> orders;
  std::vector<long> degrees;  // empty = computed
  bool operator==(const UnitsSection&) const = default;
};

struct PicSection {
  bool trivial = true;
  std::vector<long> invariants;
  bool operator==(const PicSection&) const = default;
};

struct GroupSection {
  std::string descriptor;  // empty when given by a table
  std::vector<std::string> elements;
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> generators;
  bool operator==(const GroupSection&) const = default;
};

struct WitnessSection {
  std::vector<std::string> u;
  std::vector<std::string> v;
  std::string trace;
  bool operator==(const WitnessSection&) const = default;
};

using ImageList = std::vector<std::pair<std::string, std::string>>;

struct ExtensionFile {
  int schema = 1;
  std::string name;
  std::string base_ring;
  std::optional<UnitsSection> base_units;
  PicSection pic;
  std::string ring;
  std::vector<std::string> basis;
  std::optional<UnitsSection> ring_units;
  GroupSection group;
  std::vector<std::pair<std::string, ImageList>> action;
  std::optional<WitnessSection> witness;
  std::vector<std::pair<std::string, long>> grading;

  std::map<std::string, Location> locations;  // not part of the value

  bool operator==(const ExtensionFile& o) const {
    return schema == o.schema && name == o.name && base_ring == o.base_ring && base_units == o.base_units &&
           pic == o.pic && ring == o.ring && basis == o.basis && ring_units == o.ring_units && group == o.group &&
           action == o.action && witness == o.witness && grading == o.grading;
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline Location loc_of(const YAML::Node& n) {
  auto m = n.Mark();
  if (m.is_null()) return {};
  return {m.line + 1, m.column + 1};
}

class FileReader {
 public:
  explicit FileReader(ExtensionFile& f) : f_(f) {}

  void map(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed) {
    if (!n.IsMap()) fail(n, path + " must be a mapping");
    for (auto it = n.begin(); it != n.end(); ++it) {
      std::string k = it->first.as<std::string>();
      if (!allowed.count(k)) fail(it->first, "unknown key '" + k + "' in " + path);
    }
  }
  void require(const YAML::Node& parent, const std::string& key, const std::string& path) {
    if (!parent[key]) fail(parent, "missing key '" + key + "' in " + path);
  }
  std::string scalar(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(n, path + " must be a scalar");
    f_.locations[path] = loc_of(n);
    return n.Scalar();
  }
  long integer(const YAML::Node& n, const std::string& path) {
    std::string s = scalar(n, path);
    try {
      std::size_t pos = 0;
      long v = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(n, path + " must be an integer");
    }
  }
  std::vector<std::string> strings(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) fail(n, path + " must be a list");
    f_.locations[path] = loc_of(n);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<long> integers(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) fail(n, path + " must be a list");
    std::vector<long> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(integer(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  UnitsSection units(const YAML::Node& n, const std::string& path) {
    map(n, path, {"generators", "orders", "degrees"});
    require(n, "generators", path);
    require(n, "orders", path);
    UnitsSection u;
    u.generators = strings(n["generators"], path + ".generators");
    u.orders = integers(n["orders"], path + ".orders");
    if (n["degrees"]) u.degrees = integers(n["degrees"], path + ".degrees");
    if (u.orders.size() != u.generators.size()) fail(n["orders"], path + ".orders must match the generators");
    if (!u.degrees.empty() && u.degrees.size() != u.generators.size()) fail(n["degrees"], path + ".degrees must match the generators");
    return u;
  }

  [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) { throw FormatError(ErrorCode::ParseError, msg, loc_of(n)); }

 private:
  ExtensionFile& f_;
};

}  // namespace detail

inline ExtensionFile parse_extension_file(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw FormatError(ErrorCode::ParseError, e.msg, {e.mark.line + 1, e.mark.column + 1});
  }
  ExtensionFile f;
  detail::FileReader rd(f);
  rd.map(root, "file", {"schema", "name", "base", "extension", "group", "action", "witness", "grading"});
  rd.require(root, "schema", "file");
  f.schema = static_cast<int>(rd.integer(root["schema"], "schema"));
  if (f.schema != 1) rd.fail(root["schema"], "unsupported schema " + std::to_string(f.schema));
  if (root["name"]) f.name = rd.scalar(root["name"], "name");

  rd.require(root, "base", "file");
  const YAML::Node base = root["base"];
  rd.map(base, "base", {"ring", "units", "pic"});
  rd.require(base, "ring", "base");
  f.base_ring = rd.scalar(base["ring"], "base.ring");
  if (base["units"]) f.base_units = rd.units(base["units"], "base.units");
  if (base["pic"]) {
    const YAML::Node p = base["pic"];
    if (p.IsScalar()) {
      if (p.Scalar() != "trivial") rd.fail(p, "base.pic must be 'trivial' or {declared: [...]}");
    } else {
      rd.map(p, "base.pic", {"declared"});
      rd.require(p, "declared", "base.pic");
      f.pic.trivial = false;
      f.pic.invariants = rd.integers(p["declared"], "base.pic.declared");
    }
  }

  rd.require(root, "extension", "file");
  const YAML::Node ext = root["extension"];
  rd.map(ext, "extension", {"ring", "basis", "units"});
  rd.require(ext, "ring", "extension");
  f.ring = rd.scalar(ext["ring"], "extension.ring");
  if (ext["basis"]) f.basis = rd.strings(ext["basis"], "extension.basis");
  if (ext["units"]) f.ring_units = rd.units(ext["units"], "extension.units");

  rd.require(root, "group", "file");
  const YAML::Node grp = root["group"];
  if (grp.IsScalar()) {
    f.group.descriptor = rd.scalar(grp, "group");
  } else {
    rd.map(grp, "group", {"elements", "table", "generators"});
    for (const char* k : {"elements", "table", "generators"}) rd.require(grp, k, "group");
    f.group.elements = rd.strings(grp["elements"], "group.elements");
    const YAML::Node t = grp["table"];
    if (!t.IsSequence()) rd.fail(t, "group.table must be a list of rows");
    for (std::size_t i = 0; i < t.size(); ++i) f.group.table.push_back(rd.strings(t[i], "group.table[" + std::to_string(i) + "]"));
    f.group.generators = rd.strings(grp["generators"], "group.generators");
  }

  if (root["action"]) {
    const YAML::Node act = root["action"];
    if (!act.IsMap()) rd.fail(act, "action must map group generators to images");
    for (auto it = act.begin(); it != act.end(); ++it) {
      std::string g = it->first.as<std::string>();
      const std::string path = "action." + g;
      f.locations[path] = detail::loc_of(it->first);
      if (!it->second.IsMap()) rd.fail(it->second, path + " must map variables to images");
      ImageList images;
      for (auto jt = it->second.begin(); jt != it->second.end(); ++jt) {
        std::string v = jt->first.as<std::string>();
        images.emplace_back(v, rd.scalar(jt->second, path + "." + v));
      }
      f.action.emplace_back(g, std::move(images));
    }
  }
  if (root["witness"]) {
    const YAML::Node w = root["witness"];
    rd.map(w, "witness", {"u", "v", "trace"});
    WitnessSection ws;
    if (w["u"] || w["v"]) {
      rd.require(w, "u", "witness");
      rd.require(w, "v", "witness");
      ws.u = rd.strings(w["u"], "witness.u");
      ws.v = rd.strings(w["v"], "witness.v");
      if (ws.u.size() != ws.v.size()) rd.fail(w["v"], "witness.u and witness.v differ in length");
    }
    if (w["trace"]) ws.trace = rd.scalar(w["trace"], "witness.trace");
    f.witness = ws;
  }
  if (root["grading"]) {
    const YAML::Node gr = root["grading"];
    if (!gr.IsMap()) rd.fail(gr, "grading must map variables to degrees");
    for (auto it = gr.begin(); it != gr.end(); ++it) {
      std::string v = it->first.as<std::string>();
      f.grading.emplace_back(v, rd.integer(it->second, "grading." + v));
    }
  }
  return f;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(ErrorCode::ParseError, "cannot read " + path, {});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Canonical emitter

namespace detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string quoted_list(const std::vector<std::string>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + quote(xs[i]);
  return s + "]";
}

inline std::string int_list(const std::vector<long>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "]";
}

inline void emit_units(std::ostringstream& os, const UnitsSection& u) {
  os << "  units:\n";
  os << "    generators: " << quoted_list(u.generators) << "\n";
  os << "    orders: " << int_list(u.orders) << "\n";
  if (!u.degrees.empty()) os << "    degrees: " << int_list(u.degrees) << "\n";
}

}  // namespace detail

inline std::string emit_extension_file(const ExtensionFile& f) {
  using detail::quote;
  std::ostringstream os;
  os << "schema: " << f.schema << "\n";
  if (!f.name.empty()) os << "name: " << quote(f.name) << "\n";
  os << "base:\n";
  os << "  ring: " << quote(f.base_ring) << "\n";
  if (f.base_units) detail::emit_units(os, *f.base_units);
  if (!f.pic.trivial) os << "  pic: {declared: " << detail::int_list(f.pic.invariants) << "}\n";
  os << "extension:\n";
  os << "  ring: " << quote(f.ring) << "\n";
  if (!f.basis.empty()) os << "  basis: " << detail::quoted_list(f.basis) << "\n";
  if (f.ring_units) detail::emit_units(os, *f.ring_units);
  if (!f.group.descriptor.empty()) {
    os << "group: " << quote(f.group.descriptor) << "\n";
  } else {
    os << "group:\n";
    os << "  elements: " << detail::quoted_list(f.group.elements) << "\n";
    os << "  table:\n";
    for (const auto& row : f.group.table) os << "    - " << detail::quoted_list(row) << "\n";
    os << "  generators: " << detail::quoted_list(f.group.generators) << "\n";
  }
  if (!f.action.empty()) {
    os << "action:\n";
    for (const auto& [g, images] : f.action) {
      os << "  " << quote(g) << ": {";
      for (std::size_t i = 0; i < images.size(); ++i) os << (i ? ", " : "") << quote(images[i].first) << ": " << quote(images[i].second);
      os << "}\n";
    }
  }
  if (f.witness) {
    os << "witness:\n";
    if (!f.witness->u.empty()) {
      os << "  u: " << detail::quoted_list(f.witness->u) << "\n";
      os << "  v: " << detail::quoted_list(f.witness->v) << "\n";
    }
    if (!f.witness->trace.empty()) os << "  trace: " << quote(f.witness->trace) << "\n";
  }
  if (!f.grading.empty()) {
    os << "grading:\n";
    for (const auto& [v, d] : f.grading) os << "  " << quote(v) << ": " << d << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Building library objects

struct LoadedExtension {
  std::string name;
  std::shared_ptr<const Extension> ext;
  std::optional<UnitGroupPresentation> base_units;  // declared or standard
  std::optional<UnitGroupPresentation> ring_units;  // declared or standard
  PicardWitness pic;
  std::optional<SeparabilityWitness> witness;
  std::optional<Element> trace_preimage;
};

namespace detail {

inline Location location(const ExtensionFile& f, const std::string& path) {
  auto it = f.locations.find(path);
  return it == f.locations.end() ? Location{} : it->second;
}

template <class F>
auto at(const ExtensionFile& f, const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(e.code(), path + ": " + e.message(), location(f, path));
  }
}

inline UnitGroupPresentation build_units(const ExtensionFile& f, const UnitsSection& u, const RingPtr& r, const std::string& path) {
  UnitGroupPresentation p;
  p.ring = r;
  for (std::size_t i = 0; i < u.generators.size(); ++i) {
    const std::string sub = path + ".generators[" + std::to_string(i) + "]";
    p.generators.push_back(at(f, sub, [&] { return parse_element(r, u.generators[i]); }));
    p.orders.push_back(u.orders[i]);
    if (!u.degrees.empty()) {
      p.degrees.push_back(u.degrees[i]);
    } else {
      auto d = homogeneous_degree(p.generators.back());
      p.degrees.push_back(d.value_or(0));
    }
  }
  p.relations = Matrix<Integer>(p.rank(), 0, 0);
  at(f, path + ".generators", [&] {
    validate(p);
    return 0;
  });
  return p;
}

inline GroupPtr build_group(const ExtensionFile& f) {
  if (!f.group.descriptor.empty()) return at(f, "group", [&] { return parse_group(f.group.descriptor); });
  return at(f, "group.elements", [&] {
    const auto& names = f.group.elements;
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < names.size(); ++i) idx[names[i]] = i;
    auto find = [&](const std::string& s) {
      auto it = idx.find(s);
      if (it == idx.end()) throw Error(ErrorCode::ParseError, "unknown group element " + s);
      return it->second;
    };
    if (f.group.table.size() != names.size()) throw Error(ErrorCode::ShapeMismatch, "table must have one row per element");
    std::vector<std::vector<std::size_t>> table;
    for (const auto& row : f.group.table) {
      std::vector<std::size_t> r;
      for (const auto& x : row) r.push_back(find(x));
      table.push_back(r);
    }
    std::vector<std::size_t> gens;
    for (const auto& g : f.group.generators) gens.push_back(find(g));
    return GroupPtr(std::make_shared<FiniteGroup>("table", names, table, gens));
  });
}

}  // namespace detail

inline LoadedExtension load_extension(const ExtensionFile& f) {
  using detail::at;
  LoadedExtension out;
  out.name = f.name;
  RingPtr base = at(f, "base.ring", [&] { return parse_ring(f.base_ring); });
  RingPtr ring = at(f, "extension.ring", [&] { return parse_ring(f.ring); });
  for (const auto& [v, d] : f.grading) {
    at(f, "grading." + v, [&] {
      auto e = detail::named_element(ring, v);
      if (!e) throw Error(ErrorCode::ParseError, "unknown variable " + v);
      auto hd = homogeneous_degree(*e);
      if (!hd || *hd != d) throw Error(ErrorCode::DescriptorMismatch, "declared degree " + std::to_string(d) + " differs from the ring descriptor");
      return 0;
    });
  }
  GroupPtr g = detail::build_group(f);
  std::vector<GeneratorImages> images(g->generators().size());
  std::vector<bool> seen(images.size(), false);
  for (const auto& [gname, list] : f.action) {
    std::size_t gi = at(f, "action." + gname, [&] {
      for (std::size_t i = 0; i < g->generators().size(); ++i)
        if (g->name(g->generators()[i]) == gname) return i;
      throw Error(ErrorCode::ParseError, "'" + gname + "' is not a generator of " + g->label());
    });
    if (seen[gi]) throw FormatError(ErrorCode::ParseError, "duplicate action for " + gname, detail::location(f, "action." + gname));
    seen[gi] = true;
    for (const auto& [var, text] : list) {
      const std::string path = "action." + gname + "." + var;
      at(f, path, [&] {
        if (!detail::named_element(ring, var)) throw Error(ErrorCode::ParseError, "unknown variable " + var);
        images[gi][var] = parse_element(ring, text);
        return 0;
      });
    }
  }
  std::vector<Element> basis;
  for (std::size_t i = 0; i < f.basis.size(); ++i)
    basis.push_back(at(f, "extension.basis[" + std::to_string(i) + "]", [&] { return parse_element(ring, f.basis[i]); }));
  out.ext = at(f, "extension.basis", [&] { return std::make_shared<const Extension>(base, ring, g, images, basis); });
  if (f.base_units) out.base_units = detail::build_units(f, *f.base_units, base, "base.units");
  else out.base_units = standard_units(base);
  if (f.ring_units) out.ring_units = detail::build_units(f, *f.ring_units, ring, "extension.units");
  else out.ring_units = standard_units(ring);
  if (!f.pic.trivial) {
    out.pic.kind = PicardKind::Declared;
    for (auto x : f.pic.invariants) out.pic.invariants.push_back(x);
  }
  if (f.witness) {
    if (!f.witness->u.empty()) {
      SeparabilityWitness w;
      for (std::size_t i = 0; i < f.witness->u.size(); ++i) {
        w.u.push_back(at(f, "witness.u[" + std::to_string(i) + "]", [&] { return parse_element(ring, f.witness->u[i]); }));
        w.v.push_back(at(f, "witness.v[" + std::to_string(i) + "]", [&] { return parse_element(ring, f.witness->v[i]); }));
      }
      out.witness = w;
    }
    if (!f.witness->trace.empty()) out.trace_preimage = at(f, "witness.trace", [&] { return parse_element(ring, f.witness->trace); });
  }
  return out;
}

inline LoadedExtension load_extension_file(const std::string& path) {
  return load_extension(parse_extension_file(read_text_file(path)));
}

/// File form of an extension built in memory (for instance a Harrison product).
inline ExtensionFile to_extension_file(const Extension& ext, const std::string& name = "") {
  ExtensionFile f;
  f.name = name;
  f.base_ring = ext.base()->key();
  f.ring = ext.ring()->key();
  bool natural = ext.basis() == ext.natural_basis();
  if (!natural)
    for (const auto& b : ext.basis()) f.basis.push_back(b.str());
  const auto& g = *ext.group();
  if (g.label() != "table") {
    f.group.descriptor = g.label();
  } else {
    for (std::size_t a = 0; a < g.order(); ++a) {
      f.group.elements.push_back(g.name(a));
      std::vector<std::string> row;
      for (std::size_t b = 0; b < g.order(); ++b) row.push_back(g.name(g.mul(a, b)));
      f.group.table.push_back(row);
    }
    for (auto gen : g.generators()) f.group.generators.push_back(g.name(gen));
  }
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    ImageList list;
    for (const auto& [var, img] : ext.images()[gi]) list.emplace_back(var, img.str());
    if (!list.empty()) f.action.emplace_back(g.name(g.generators()[gi]), list);
  }
  return f;
}

}  // namespace galois
