#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "galois/cli.hpp"
#include "support.hpp"

using namespace galois;
using namespace galois::testing;

namespace {

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(std::string(GALOIS_SOURCE_DIR) + "/corpus"))
    if (e.path().extension() == ".ext") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "galoisctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream os, es;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), os, es);
  return {code, os.str(), es.str()};
}

FormatError parse_failure(const std::string& text) {
  try {
    parse_extension_file(text);
  } catch (const FormatError& e) {
    return e;
  }
  ADD_FAILURE() << "parsed without error";
  return FormatError(ErrorCode::ParseError, "", {});
}

const char* kMinimal = R"Y(schema: 1
base:
  ring: "Z[1/2]"
extension:
  ring: "Z[1/2][i]/(i^2+1)"
group: "cyclic(2)"
action:
  "g": {"i": "-i"}
)Y";

}  // namespace

// ---- format ----

TEST(Format, EmitIsIdempotentOnCorpus) {
  auto files = corpus_files();
  ASSERT_GE(files.size(), 10u);
  for (const auto& f : files) {
    auto a = parse_extension_file(read_text_file(corpus(f)));
    std::string once = emit_extension_file(a);
    std::string twice = emit_extension_file(parse_extension_file(once));
    EXPECT_EQ(once, twice) << f;
  }
}

TEST(Format, CanonicalFileRoundTripsExactly) {
  std::string text = read_text_file(corpus("z12i.ext"));
  EXPECT_EQ(emit_extension_file(parse_extension_file(text)), text);
}

TEST(Format, ReloadedExtensionCertifiesTheSame) {
  for (const auto& f : corpus_files()) {
    auto le = load(f);
    auto again = load_extension(parse_extension_file(emit_extension_file(to_extension_file(*le.ext, le.name))));
    EXPECT_EQ(certify(*le.ext).verdict, certify(*again.ext).verdict) << f;
  }
}

TEST(Format, UnknownKeyHasPosition) {
  std::string text = std::string(kMinimal) + "colour: \"blue\"\n";
  auto e = parse_failure(text);
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.location().line, 9);
  EXPECT_EQ(e.location().column, 1);
  EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
}

TEST(Format, NestedUnknownKeyHasPosition) {
  std::string text = kMinimal;
  text.replace(text.find("  ring: \"Z[1/2]\"\n"), 0, "  rings: \"Z\"\n");
  auto e = parse_failure(text);
  EXPECT_EQ(e.location().line, 3);
  EXPECT_EQ(e.location().column, 3);
}

TEST(Format, MissingGroupIsReported) {
  std::string text = kMinimal;
  text.erase(text.find("group:"), std::string("group: \"cyclic(2)\"\n").size());
  auto e = parse_failure(text);
  EXPECT_NE(std::string(e.what()).find("group"), std::string::npos);
}

TEST(Format, BadYamlIsParseError) {
  auto e = parse_failure("schema: 1\nbase: [unclosed\n");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_GT(e.location().line, 0);
}

TEST(Format, NonMonicModulusRejectedAtLoad) {
  auto f = parse_extension_file(read_text_file(corpus("nonmonic.bad")));
  try {
    load_extension(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownRingConstructor);
  }
}

TEST(Format, BadActionLoadsButFailsVerification) {
  auto le = load("bad_action.ext");
  EXPECT_FALSE(verify_action(*le.ext).valid);
}

TEST(Format, MalformedElementNamesLocation) {
  std::string text = kMinimal;
  text.replace(text.find("\"-i\""), 4, "\"-i+\"");
  try {
    load_extension(parse_extension_file(text));
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.location().line, 8);
  }
}

TEST(Format, TrivialExtensionExport) {
  Extension triv = trivial_extension(parse_ring("Q x Q"), cyclic_group(2));
  auto again = load_extension(parse_extension_file(emit_extension_file(to_extension_file(triv, "t"))));
  EXPECT_EQ(certify(*again.ext).verdict, Verdict::Valid);
}

// ---- reports ----

TEST(Report, JsonRoundTrip) {
  Report r;
  r.command = "check";
  r.inputs["file"] = "z12i.ext";
  r.verdict = "VALID";
  r.diagnostics = {"G-1 PASS", "G-2 PASS"};
  r.data["det"] = "-i";
  r.timing_ms = 1.5;
  EXPECT_EQ(report_from_json(to_json(r)), r);
  EXPECT_EQ(report_from_json(Json::parse(to_json(r).dump())), r);
}

TEST(Report, KeyOrderIsStable) {
  Report r;
  r.command = "trace";
  std::string s = to_json(r).dump();
  EXPECT_LT(s.find("\"schema\""), s.find("\"command\""));
  EXPECT_LT(s.find("\"command\""), s.find("\"verdict\""));
}

// ---- command line ----

TEST(Cli, CheckValid) {
  auto r = run_cli({"check", corpus("z12i.ext")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: VALID"), std::string::npos);
}

TEST(Cli, CheckInvalid) {
  auto r = run_cli({"check", corpus("zi.ext")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ramification at the prime 2"), std::string::npos);
}

TEST(Cli, CheckJson) {
  auto r = run_cli({"--json", "check", corpus("zi.ext")});
  EXPECT_EQ(r.code, 1);
  auto rep = report_from_json(Json::parse(r.out));
  EXPECT_EQ(rep.command, "check");
  EXPECT_EQ(rep.verdict, "INVALID");
  EXPECT_EQ(rep.exit_code, 1);
}

TEST(Cli, InputErrorsExitThree) {
  EXPECT_EQ(run_cli({"check", corpus("nonmonic.bad")}).code, 3);
  EXPECT_EQ(run_cli({"check", corpus("does_not_exist.ext")}).code, 3);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
  EXPECT_EQ(run_cli({"--max-degree", "9", "cohomology", corpus("z12i.ext")}).code, 3);
}

TEST(Cli, CorpusExitIsWorst) {
  auto r = run_cli({"check", "--corpus", std::string(GALOIS_SOURCE_DIR) + "/corpus"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, Trace) {
  auto r = run_cli({"trace", corpus("zi.ext")});
  EXPECT_EQ(r.code, 1);
  auto ok = run_cli({"trace", corpus("z12i.ext")});
  EXPECT_EQ(ok.code, 0);
}

TEST(Cli, KummerGraded) {
  auto r = run_cli({"kummer", "--ring", "Z[1/2][y,y^-1;deg=4]", "--n", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("C2 x C2 x C2"), std::string::npos);
}

TEST(Cli, HarrisonOrder) {
  auto r = run_cli({"--json", "harrison", "--ring", "Z[1/2]", "--group", "product(cyclic(2),cyclic(2))"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("16"), std::string::npos);
}

TEST(Cli, Cohomology) {
  auto r = run_cli({"--max-degree", "2", "cohomology", corpus("z12i.ext")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("H^0(cyclic(2); S) = Z[1/2]"), std::string::npos);
  EXPECT_NE(r.out.find("H^2(cyclic(2); S) = 0"), std::string::npos);
}

TEST(Cli, Duality) {
  EXPECT_EQ(run_cli({"duality", "--ring", "Z", "--module", "free:3"}).code, 0);
  EXPECT_EQ(run_cli({"duality", "--ring", "Z", "--module", "presented:[[\"2\"]]"}).code, 1);
  EXPECT_EQ(run_cli({"duality", "--ring", "Z", "--module", "idem:[[\"1\",\"1\"],[\"0\",\"0\"]]"}).code, 0);
  EXPECT_EQ(run_cli({"duality", "--ring", "Z", "--module", "bogus"}).code, 3);
}

TEST(Cli, Decompose) {
  auto r = run_cli({"decompose", corpus("z12i.ext")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, Hilbert90) {
  EXPECT_EQ(run_cli({"hilbert90", corpus("z12i.ext")}).code, 0);
}

TEST(Cli, ProductWritesLoadableFile) {
  auto out = std::filesystem::temp_directory_path() / "galois_product_test.ext";
  auto r = run_cli({"product", corpus("z12i.ext"), corpus("z12_sqrt2.ext"), "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  auto le = load_extension_file(out.string());
  EXPECT_EQ(certify(*le.ext).verdict, Verdict::Valid);
  // [-1][2] = [-2]
  RingPtr base = le.ext->base();
  auto kg = kummer_group(base, 2, standard_units(base));
  EXPECT_EQ(classify_cyclic(*le.ext, kg), kummer_class(kg, parse_element(base, "-2")));
  std::filesystem::remove(out);
}
