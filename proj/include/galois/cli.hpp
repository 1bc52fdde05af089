#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "galois/cohomology.hpp"
#include "galois/format.hpp"
#include "galois/galois.hpp"
#include "galois/kummer.hpp"
#include "galois/modules.hpp"
#include "galois/report.hpp"

namespace galois::cli {

enum Exit { Ok = 0, Failed = 1, Incomplete = 2, BadInput = 3 };

struct Options {
  bool json = false;
  bool timing = false;
  int max_degree = 4;
  long search_bound = 2;
  std::string corpus;
  std::vector<std::string> files;
  std::string extension;
  std::string ring;
  std::string group;
  long n = 0;
  std::string module;
  bool units = false;
  std::string output;
};

/// Text lines and the JSON report are built side by side.
struct Output {
  Report report;
  std::vector<std::string> lines;
  void line(const std::string& s) { lines.push_back(s); }
};

inline int exit_for(Verdict v) { return v == Verdict::Valid ? Ok : v == Verdict::Invalid ? Failed : Incomplete; }
inline int exit_for(Check c) { return c == Check::Pass ? Ok : c == Check::Fail ? Failed : Incomplete; }

inline bool input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownRingConstructor:
    case ErrorCode::MalformedElement:
    case ErrorCode::DescriptorMismatch:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::BasisNotSpanning:
      return true;
    default:
      return false;
  }
}

inline Json strings_json(const std::vector<Element>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x.str());
  return a;
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

inline std::string element_list(const std::vector<Element>& xs) {
  std::vector<std::string> s;
  for (const auto& x : xs) s.push_back(x.str());
  return "[" + join(s, ", ") + "]";
}

inline std::string extension_file(const Options& o) {
  if (!o.extension.empty()) return o.extension;
  if (!o.files.empty()) return o.files[0];
  throw Error(ErrorCode::ParseError, "an extension file is required");
}

// ---------------------------------------------------------------------------
// Commands

inline void certify_one(const LoadedExtension& le, const Options& o, Output& out, Json& data) {
  CertifyOptions opt;
  opt.search_bound = o.search_bound;
  if (le.ring_units) opt.s_units = &*le.ring_units;
  auto c = certify(*le.ext, le.witness, opt);
  data["verdict"] = to_string(c.verdict);
  data["action"] = c.action_diagnosis;
  out.line("action: " + c.action_diagnosis);
  if (c.action_valid) {
    data["G1"] = {{"status", to_string(c.g1.status)}, {"method", c.g1.method}, {"diagnosis", c.g1.diagnosis}};
    Json g2 = {{"status", to_string(c.g2.status)}, {"diagnosis", c.g2.diagnosis}};
    if (c.g2.det) g2["det"] = c.g2.det->str();
    if (c.g2.det_inverse) g2["det_inverse"] = c.g2.det_inverse->str();
    data["G2"] = g2;
    Json w = {{"status", to_string(c.witness_check)}};
    if (c.witness) {
      w["u"] = strings_json(c.witness->u);
      w["v"] = strings_json(c.witness->v);
    }
    data["witness"] = w;
    Json t = {{"status", to_string(c.trace.status)}, {"diagnosis", c.trace.diagnosis}};
    if (c.trace.witness) t["witness"] = c.trace.witness->str();
    data["trace"] = t;
    if (c.endo.det) data["endomorphisms"] = {{"status", to_string(c.endo.status)}, {"det", c.endo.det->str()}};
    out.line("fixed ring: " + std::string(to_string(c.g1.status)) + " (" + c.g1.method + ") " + c.g1.diagnosis);
    out.line("Theta: " + std::string(to_string(c.g2.status)) + " " + c.g2.diagnosis);
    if (c.witness)
      out.line("separability witness: u = " + element_list(c.witness->u) + ", v = " + element_list(c.witness->v));
    else
      out.line(std::string("separability witness: ") + to_string(c.witness_check));
    out.line("trace: " + std::string(to_string(c.trace.status)) + " " + c.trace.diagnosis);
    if (c.endo.det) out.line("S#G -> End_R(S): " + std::string(to_string(c.endo.status)) + " " + c.endo.diagnosis);
  }
  for (const auto& d : c.diagnostics) out.report.diagnostics.push_back(d);
  out.report.verdict = to_string(c.verdict);
  out.report.exit_code = exit_for(c.verdict);
}

inline int cmd_check(const Options& o, Output& out) {
  if (!o.corpus.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(o.corpus))
      if (e.path().extension() == ".ext") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    out.report.inputs["corpus"] = o.corpus;
    Json list = Json::array();
    int worst = Ok;
    for (const auto& f : files) {
      Json entry = {{"file", f.filename().string()}};
      std::string verdict;
      int code;
      try {
        auto le = load_extension_file(f.string());
        Output sub;
        Json data;
        certify_one(le, o, sub, data);
        verdict = sub.report.verdict;
        code = sub.report.exit_code;
        entry["name"] = le.name;
      } catch (const Error& e) {
        verdict = "ERROR";
        code = input_error(e.code()) ? BadInput : Incomplete;
        entry["error"] = e.what();
      }
      entry["verdict"] = verdict;
      list.push_back(entry);
      out.line(f.filename().string() + ": " + verdict);
      worst = std::max(worst, code);
    }
    out.report.data["results"] = list;
    out.report.verdict = worst == Ok ? "VALID" : worst == Failed ? "INVALID" : worst == Incomplete ? "INCOMPLETE" : "ERROR";
    out.report.exit_code = worst;
    return worst;
  }
  const std::string path = extension_file(o);
  out.report.inputs["extension"] = path;
  auto le = load_extension_file(path);
  if (!le.name.empty()) out.line("extension: " + le.name);
  certify_one(le, o, out, out.report.data);
  return out.report.exit_code;
}

inline int cmd_trace(const Options& o, Output& out) {
  const std::string path = extension_file(o);
  out.report.inputs["extension"] = path;
  auto le = load_extension_file(path);
  const Extension& ext = *le.ext;
  Json tr = Json::array();
  for (const auto& b : ext.basis()) {
    std::string t;
    try {
      t = trace(ext, b).str();
    } catch (const Error& e) {
      t = e.what();
    }
    out.line("tr(" + b.str() + ") = " + t);
    tr.push_back({{"element", b.str()}, {"trace", t}});
  }
  out.report.data["basis_traces"] = tr;
  auto res = trace_surjectivity(ext);
  if (le.trace_preimage) {
    auto t = trace(ext, *le.trace_preimage);
    out.line("declared trace witness: tr(" + le.trace_preimage->str() + ") = " + t.str());
    out.report.data["declared_witness"] = {{"element", le.trace_preimage->str()}, {"trace", t.str()}};
  }
  if (res.image_generator) out.report.data["image_generator"] = res.image_generator->str();
  if (res.witness) out.report.data["witness"] = res.witness->str();
  out.line("surjective: " + std::string(to_string(res.status)) + " " + res.diagnosis);
  out.report.diagnostics.push_back(res.diagnosis);
  out.report.verdict = to_string(res.status);
  out.report.exit_code = exit_for(res.status);
  return out.report.exit_code;
}

inline Json class_list_json(const std::vector<KummerClass>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(c.str());
  return a;
}

inline std::string class_list(const std::vector<KummerClass>& cs) {
  std::vector<std::string> s;
  for (const auto& c : cs) s.push_back(c.str());
  return join(s, ",");
}

inline int cmd_kummer(const Options& o, Output& out) {
  out.report.inputs["ring"] = o.ring;
  out.report.inputs["n"] = o.n;
  RingPtr r = parse_ring(o.ring);
  auto units = standard_units(r);
  auto kg = r->graded() ? graded_kummer_group(r, o.n, units) : kummer_group(r, o.n, units);
  auto gens = generator_classes(kg);
  std::string head = kg->describe() + "; generators " + class_list(gens);
  out.line((r->graded() ? "graded Kummer group: " : "Kummer group: ") + head);
  out.report.data["group"] = kg->describe();
  out.report.data["order"] = kg->order().get_str();
  out.report.data["generators"] = class_list_json(gens);
  Json models = Json::array();
  for (const auto& c : all_classes(kg)) {
    if (c.is_trivial()) continue;
    std::string label = kummer_model_label(c);
    out.line("  " + c.str() + " -> " + label);
    models.push_back({{"class", c.str()}, {"model", label}});
  }
  out.report.data["models"] = models;
  out.report.verdict = "OK";
  return Ok;
}

inline int cmd_harrison(const Options& o, Output& out) {
  out.report.inputs["ring"] = o.ring;
  out.report.inputs["group"] = o.group;
  RingPtr r = parse_ring(o.ring);
  GroupPtr g = parse_group(o.group);
  auto h = harrison_abelian(r, g, standard_units(r));
  std::vector<std::string> gens;
  Json factors = Json::array();
  for (std::size_t i = 0; i < h.kummer.size(); ++i) {
    auto cs = generator_classes(h.kummer[i]);
    gens.push_back(class_list(cs));
    factors.push_back({{"n", h.cyclic_factors[i]}, {"group", h.kummer[i]->describe()}, {"generators", class_list_json(cs)}});
  }
  out.line("Har(" + r->key() + ", " + g->label() + ") = " + h.describe() + "; generators " + join(gens, " | "));
  out.line("order: " + h.order().get_str());
  out.line("note: " + h.note);
  out.report.data["group"] = h.describe();
  out.report.data["order"] = h.order().get_str();
  out.report.data["exact"] = h.exact;
  out.report.data["factors"] = factors;
  out.report.diagnostics.push_back(h.note);
  out.report.verdict = h.exact ? "OK" : "PARTIAL";
  out.report.exit_code = h.exact ? Ok : Incomplete;
  return out.report.exit_code;
}

inline int cmd_decompose(const Options& o, Output& out) {
  const std::string path = extension_file(o);
  out.report.inputs["extension"] = path;
  auto le = load_extension_file(path);
  const Extension& ext = *le.ext;
  const auto& g = *ext.group();
  const long e = g.exponent();
  auto zeta = root_of_unity_in(ext.base(), e);
  if (!zeta) throw Error(ErrorCode::RootOfUnityMissing, "no primitive " + std::to_string(e) + "-th root of unity in " + ext.base()->key());
  auto dec = g.generators().size() <= 1 ? eigenspaces(ext, *zeta) : character_decomposition(ext, *zeta);
  out.line("zeta = " + dec.zeta.str());
  Json pieces = Json::array();
  for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
    auto els = dec.elements(i);
    out.line(dec.pieces[i].label + ": rank " + std::to_string(els.size()) + " spanned by " + element_list(els));
    pieces.push_back({{"label", dec.pieces[i].label},
                      {"exponents", dec.pieces[i].exponents},
                      {"projector", matrix_strings(dec.pieces[i].projector)},
                      {"basis", strings_json(els)}});
  }
  Check pair = check_eigenspace_pairings(dec);
  out.line("reassembly: " + std::string(to_string(dec.reassembly)) + (dec.reassembly_det ? " det " + dec.reassembly_det->str() : ""));
  out.line("pairings: " + std::string(to_string(pair)));
  out.report.data["zeta"] = dec.zeta.str();
  out.report.data["pieces"] = pieces;
  out.report.data["reassembly"] = to_string(dec.reassembly);
  out.report.data["pairings"] = to_string(pair);
  Check all = dec.reassembly == Check::Fail || pair == Check::Fail ? Check::Fail
              : dec.reassembly == Check::Pass && pair == Check::Pass ? Check::Pass
                                                                      : Check::Undecided;
  out.report.verdict = to_string(all);
  out.report.exit_code = exit_for(all);
  return out.report.exit_code;
}

inline int cmd_cohomology(const Options& o, Output& out) {
  const std::string path = extension_file(o);
  out.report.inputs["extension"] = path;
  out.report.inputs["max_degree"] = o.max_degree;
  out.report.inputs["units"] = o.units;
  auto le = load_extension_file(path);
  GModule m;
  if (o.units) {
    if (!le.ring_units) throw Error(ErrorCode::MissingUnitPresentation, "no unit presentation for " + le.ext->ring()->key());
    m = unit_gmodule(*le.ext, *le.ring_units);
  } else {
    m = additive_gmodule(*le.ext);
  }
  auto res = cohomology(m, o.max_degree);
  Json degs = Json::array();
  for (std::size_t p = 0; p < res.degrees.size(); ++p) {
    out.line("H^" + std::to_string(p) + "(" + le.ext->group()->label() + "; " + (o.units ? "S^x" : "S") + ") = " + res.degrees[p].group.describe());
    degs.push_back(res.degrees[p].group.describe());
  }
  out.report.data["module"] = o.units ? "units" : "additive";
  out.report.data["method"] = res.method;
  out.report.data["degrees"] = degs;
  out.report.verdict = "OK";
  return Ok;
}

inline ElemMatrix parse_matrix(const RingPtr& r, const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, "matrix: " + std::string(e.what()));
  }
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(ErrorCode::ParseError, "matrix must be a list of rows");
  ElemMatrix m = zero_matrix(r, j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "ragged matrix");
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const auto& x = j[i][k];
      m(i, k) = parse_element(r, x.is_string() ? x.get<std::string>() : x.dump());
    }
  }
  return m;
}

/// free:N, idem:[[..]], presented:[[..]] (relations as columns).
inline FGModule parse_module(const RingPtr& r, const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "module must be free:N, idem:MATRIX or presented:MATRIX");
  std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "free") {
    try {
      return FGModule::free(r, std::stoul(arg));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "free:N needs a rank");
    }
  }
  if (kind == "idem") return FGModule::idempotent_image(r, parse_matrix(r, arg));
  if (kind == "presented") return FGModule::presented(r, parse_matrix(r, arg));
  throw Error(ErrorCode::ParseError, "unknown module kind " + kind);
}

inline int cmd_duality(const Options& o, Output& out) {
  out.report.inputs["ring"] = o.ring;
  out.report.inputs["module"] = o.module;
  RingPtr r = parse_ring(o.ring);
  FGModule p = parse_module(r, o.module);
  auto d = canonical_duality(p);
  auto v = check_strong_duality(d);
  out.line("module: " + p.describe());
  out.line("dual: " + d.DP.describe());
  out.line("eps = " + Json(matrix_strings(d.eps)).dump());
  out.line("eta = " + Json(matrix_strings(d.eta)).dump());
  out.line("triangle identities: " + v.str());
  out.report.data["eps"] = matrix_strings(d.eps);
  out.report.data["eta"] = matrix_strings(d.eta);
  out.report.data["p_side"] = v.p_side;
  out.report.data["dp_side"] = v.dp_side;
  out.report.verdict = v.str();
  out.report.exit_code = v.strongly_dualizable() ? Ok : Failed;
  return out.report.exit_code;
}

inline int cmd_hilbert90(const Options& o, Output& out) {
  const std::string path = extension_file(o);
  out.report.inputs["extension"] = path;
  auto le = load_extension_file(path);
  if (!le.ring_units) throw Error(ErrorCode::MissingUnitPresentation, "no unit presentation for " + le.ext->ring()->key());
  if (!le.base_units) throw Error(ErrorCode::MissingUnitPresentation, "no unit presentation for " + le.ext->base()->key());
  auto fp = unit_fixed_points(*le.ext, *le.ring_units, *le.base_units);
  CertifyOptions copt;
  copt.search_bound = o.search_bound;
  copt.s_units = &*le.ring_units;
  const bool galois = certify(*le.ext, le.witness, copt).verdict == Verdict::Valid;
  auto h1 = h1_units(unit_gmodule(*le.ext, *le.ring_units), galois && le.pic.kind == PicardKind::Trivial);
  out.line(galois ? "extension is Galois" : "extension is not certified Galois; H^1 is informational");
  out.report.data["galois"] = galois;
  out.line(std::string("unit fixed points: ") + (fp.status == FixedPointStatus::Match ? "Match" : "Mismatch") + " " + fp.diagnosis);
  out.line("fixed generators: " + element_list(fp.fixed_generators));
  out.line(h1.diagnosis);
  out.report.data["fixed_points"] = fp.status == FixedPointStatus::Match ? "Match" : "Mismatch";
  out.report.data["index"] = fp.index.get_str();
  out.report.data["fixed_generators"] = strings_json(fp.fixed_generators);
  out.report.data["h1"] = h1.group.describe();
  out.report.diagnostics.push_back(fp.diagnosis);
  out.report.diagnostics.push_back(h1.diagnosis);
  bool ok = fp.status == FixedPointStatus::Match && !h1.contradiction;
  out.report.verdict = ok ? "OK" : "FAIL";
  out.report.exit_code = ok ? Ok : Failed;
  return out.report.exit_code;
}

inline int cmd_product(const Options& o, Output& out) {
  if (o.files.size() != 2) throw Error(ErrorCode::ParseError, "product needs two extension files");
  out.report.inputs["extensions"] = o.files;
  auto a = load_extension_file(o.files[0]);
  auto b = load_extension_file(o.files[1]);
  const UnitGroupPresentation* units = a.base_units ? &*a.base_units : nullptr;
  Extension p = harrison_product(*a.ext, *b.ext, units);
  std::string name = (a.name.empty() ? "a" : a.name) + "*" + (b.name.empty() ? "b" : b.name);
  std::string text = emit_extension_file(to_extension_file(p, name));
  if (!o.output.empty()) {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + o.output);
    f << text;
    out.line("wrote " + o.output);
  } else {
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) out.line(l);
  }
  out.report.data["file"] = text;
  out.report.verdict = "OK";
  return Ok;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& os, std::ostream& err) {
  CLI::App app{"Exact certification of Galois extensions of commutative and graded rings"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "print a JSON report");
  app.add_flag("--timing", o.timing, "report elapsed time");
  app.add_option("--max-degree", o.max_degree, "highest cohomological degree")->check(CLI::Range(0, 6));
  app.add_option("--search-bound", o.search_bound, "coefficient bound of the witness search")->check(CLI::Range(0L, 50L));

  auto* check = app.add_subcommand("check", "certify an extension");
  check->add_option("file", o.files, "extension file")->expected(0, 1);
  check->add_option("--extension", o.extension);
  check->add_option("--corpus", o.corpus, "certify every .ext file in a directory");
  auto* trace_cmd = app.add_subcommand("trace", "trace map and its surjectivity");
  trace_cmd->add_option("file", o.files)->expected(0, 1);
  trace_cmd->add_option("--extension", o.extension);
  auto* kummer = app.add_subcommand("kummer", "Kummer group of a ring");
  kummer->add_option("--ring", o.ring)->required();
  kummer->add_option("--n", o.n)->required()->check(CLI::Range(1L, 1000L));
  auto* harrison = app.add_subcommand("harrison", "Harrison group of an abelian group over a ring");
  harrison->add_option("--ring", o.ring)->required();
  harrison->add_option("--group", o.group)->required();
  auto* decompose = app.add_subcommand("decompose", "eigenspace decomposition");
  decompose->add_option("file", o.files)->expected(0, 1);
  decompose->add_option("--extension", o.extension);
  auto* coh = app.add_subcommand("cohomology", "group cohomology of S or of its units");
  coh->add_option("file", o.files)->expected(0, 1);
  coh->add_option("--extension", o.extension);
  coh->add_flag("--units", o.units, "use the unit group of S");
  auto* duality = app.add_subcommand("duality", "strong duality of a module");
  duality->add_option("--ring", o.ring)->required();
  duality->add_option("--module", o.module, "free:N, idem:MATRIX or presented:MATRIX")->required();
  auto* h90 = app.add_subcommand("hilbert90", "unit fixed points and H^1 of units");
  h90->add_option("file", o.files)->expected(0, 1);
  h90->add_option("--extension", o.extension);
  auto* product = app.add_subcommand("product", "Harrison product of two extensions");
  product->add_option("files", o.files)->expected(2);
  product->add_option("-o,--output", o.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    os << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return BadInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  Output out;
  out.report.command = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  int code;
  try {
    const std::string c = sub->get_name();
    if (c == "check") code = cmd_check(o, out);
    else if (c == "trace") code = cmd_trace(o, out);
    else if (c == "kummer") code = cmd_kummer(o, out);
    else if (c == "harrison") code = cmd_harrison(o, out);
    else if (c == "decompose") code = cmd_decompose(o, out);
    else if (c == "cohomology") code = cmd_cohomology(o, out);
    else if (c == "duality") code = cmd_duality(o, out);
    else if (c == "hilbert90") code = cmd_hilbert90(o, out);
    else code = cmd_product(o, out);
  } catch (const Error& e) {
    code = input_error(e.code()) ? BadInput : e.code() == ErrorCode::Undecided || e.code() == ErrorCode::ResourceBound ? Incomplete : Failed;
    out.report.verdict = "ERROR";
    out.report.diagnostics.push_back(e.what());
    out.line(std::string("error: ") + e.what());
  }
  out.report.exit_code = code;
  if (o.timing)
    out.report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (o.json) {
    os << to_json(out.report).dump(2) << "\n";
  } else {
    for (const auto& l : out.lines) os << l << "\n";
    if (out.report.command != "product" || code != Ok) os << "verdict: " << out.report.verdict << "\n";
    if (out.report.timing_ms) os << "time: " << *out.report.timing_ms << " ms\n";
  }
  return code;
}

}  // namespace galois::cli
