#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace galois;
using namespace galois::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool ok = true;
  std::string why;
  void require(bool c, const std::string& what) {
    if (!c && ok) {
      ok = false;
      why = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.why = std::string("exception: ") + e.what();
  }
  std::ostringstream line;
  line << (o.ok ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << seconds_since(start) << " s)";
  if (!o.ok) {
    line << ": " << o.why;
    ++failures;
  }
  std::cout << line.str() << std::endl;
}

}  // namespace

int main() {
  criterion(1, "z12i is VALID, zi is INVALID with det -2i and ramification at 2", [](Outcome& o) {
    auto t = Clock::now();
    auto good = load("z12i.ext");
    auto bad = load("zi.ext");
    auto c1 = certify(*good.ext, good.witness);
    auto c2 = certify(*bad.ext, bad.witness);
    o.require(c1.verdict == Verdict::Valid, "z12i verdict");
    o.require(c2.verdict == Verdict::Invalid, "zi verdict");
    o.require(c2.g2.det && *c2.g2.det == parse_element(bad.ext->ring(), "-2*i"), "det of Theta for zi");
    o.require(c2.g2.diagnosis.find("ramification at the prime 2") != std::string::npos, "zi diagnosis");
    o.require(seconds_since(t) < 1.0, "took longer than 1 s");
  });

  criterion(2, "graded Kummer group of Z[1/2][y,y^-1;deg=4] is C2^3 with the seven models", [](Outcome& o) {
    auto t = Clock::now();
    RingPtr r = parse_ring("Z[1/2][y,y^-1;deg=4]");
    auto kg = graded_kummer_group(r, 2, standard_units(r));
    o.require(kg->describe() == "C2 x C2 x C2", "group is " + kg->describe());
    auto gens = generator_classes(kg);
    std::vector<std::string> g;
    for (const auto& c : gens) g.push_back(c.str());
    o.require(g == std::vector<std::string>{"[-1]", "[2]", "[y]"}, "generators");
    std::set<std::string> labels;
    for (const auto& c : all_classes(kg)) {
      if (c.is_trivial()) continue;
      labels.insert(kummer_model_label(c));
      auto k = build_kummer(c);
      o.require(certify(k.ext).verdict == Verdict::Valid, "model " + c.str() + " is not certified");
    }
    o.require(labels == std::set<std::string>{"i", "√2", "i√2", "√y", "i√y", "√(2*y)", "i√(2*y)"}, "model labels");
    o.require(kummer_class(kg, parse_element(r, "y/2")) == kummer_class(kg, parse_element(r, "2*y")), "[y/2] = [2y]");
    o.require(seconds_since(t) < 5.0, "took longer than 5 s");
  });

  criterion(3, "[2][-1] = [-2] by coset arithmetic and by Harrison product", [](Outcome& o) {
    RingPtr r = parse_ring("Z[1/2]");
    auto units = standard_units(r);
    auto h = harrison_cyclic(r, 2, units);
    auto kg = h.kummer[0];
    auto a = kummer_class(kg, parse_element(r, "2"));
    auto b = kummer_class(kg, parse_element(r, "-1"));
    o.require(class_product(a, b) == kummer_class(kg, parse_element(r, "-2")), "coset product");
    auto m = check_product_law(h, {a}, {b});
    o.require(m.status == MorphismStatus::Iso, "product law: " + m.diagnosis);
  });

  criterion(4, "H^s(C2; Z[1/2,i]) vanishes for s = 1..4, bar and periodic resolutions agree", [](Outcome& o) {
    auto t = Clock::now();
    auto le = load("z12i.ext");
    auto res = cohomology(additive_gmodule(*le.ext), 4);
    o.require(res.degrees[0].group.describe() == "Z[1/2]", "H^0 = " + res.degrees[0].group.describe());
    for (int s = 1; s <= 4; ++s) o.require(res.degrees[s].group.is_zero(), "H^" + std::to_string(s) + " nonzero");
    std::mt19937_64 rng(20261016);
    for (int k = 0; k < 20; ++k) {
      std::size_t n = 2 + k % 3;
      GModule m = random_cyclic_module(rng, n);
      auto bar = cohomology(m, 4);
      auto per = cyclic_oracle(m, 4);
      for (int s = 0; s <= 4; ++s)
        o.require(bar.degrees[s].group == per.degrees[s].group, "module " + std::to_string(k) + " degree " + std::to_string(s));
    }
    o.require(seconds_since(t) < 30.0, "took longer than 30 s");
  });

  criterion(5, "trace of Z[1/2,i] and the missing trace witness of Z[i]", [](Outcome& o) {
    auto le = load("z12i.ext");
    const Extension& ext = *le.ext;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int k = 0; k < 20; ++k) {
      long a = d(rng), b = d(rng);
      Element s = parse_element(ext.ring(), std::to_string(a) + "/2 + (" + std::to_string(b) + ")*i");
      o.require(trace(ext, s) == parse_element(ext.base(), std::to_string(a)), "tr(a+bi) = 2a");
    }
    o.require(trace(ext, parse_element(ext.ring(), "1/2")).is_one(), "tr(1/2) = 1");
    auto zi = load("zi.ext");
    auto tr = trace_surjectivity(*zi.ext);
    o.require(tr.status == Check::Fail && !tr.witness, "Z[i] has a trace witness");
    o.require(tr.image_generator && *tr.image_generator == Element::integer(zi.ext->base(), 2), "trace image is 2Z");
  });

  criterion(6, "equivariant endomorphisms of trivial C2/C3 extensions are isomorphisms", [](Outcome& o) {
    auto t = Clock::now();
    std::mt19937_64 rng(6);
    int count = 0;
    for (const char* base : {"Q x Q", "Z[1/6] x Z[1/6]"})
      for (std::size_t n : {2, 3}) {
        RingPtr r = parse_ring(base);
        Extension triv = trivial_extension(r, cyclic_group(n));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int k = 0; k < 12 + (n == 2 ? 1 : 0); ++k) {
          std::vector<std::size_t> h{pick(rng), pick(rng)};
          if (k == 0) h = {1, 0};  // idempotent swap
          auto m = check_morphism_iso(triv, triv, componentwise_translation(triv, h), true);
          o.require(m.status == MorphismStatus::Iso, std::string(base) + ": " + m.diagnosis);
          ++count;
        }
      }
    o.require(count >= 50, "only " + std::to_string(count) + " endomorphisms");
    o.require(seconds_since(t) < 10.0, "took longer than 10 s");
  });

  criterion(7, "strong duality for free and idempotent modules, failure for Z/2, retracts", [](Outcome& o) {
    std::mt19937_64 rng(7);
    for (const char* base : {"Z", "Q", "Z[1/2]"}) {
      RingPtr r = parse_ring(base);
      for (std::size_t n = 1; n <= 4; ++n) {
        FGModule f = FGModule::free(r, n);
        auto df = canonical_duality(f);
        o.require(check_strong_duality(df).strongly_dualizable(), std::string(base) + " free");
        for (std::size_t rank = 0; rank <= n; ++rank) {
          ElemMatrix e = random_idempotent(rng, r, n, rank);
          FGModule q = FGModule::idempotent_image(r, e);
          o.require(check_strong_duality(canonical_duality(q)).strongly_dualizable(), std::string(base) + " idempotent");
          ModuleHom j = make_hom(q, f, e), pr = make_hom(f, q, e);
          auto dq = retract_duality(df, j, pr);
          o.require(check_strong_duality(dq).strongly_dualizable(), std::string(base) + " retract");
        }
      }
    }
    RingPtr z = parse_ring("Z");
    ElemMatrix rel = zero_matrix(z, 1, 1);
    rel(0, 0) = Element::integer(z, 2);
    o.require(!check_strong_duality(canonical_duality(FGModule::presented(z, rel))).strongly_dualizable(), "Z/2 is dualizable");
  });

  criterion(8, "unit fixed points match and H^1 of units vanishes for Z[1/2,i]", [](Outcome& o) {
    for (const char* f : {"z12i.ext", "zi.ext", "f25.ext", "z9_sqrt2.ext"}) {
      auto le = load(f);
      auto fp = unit_fixed_points(*le.ext, *le.ring_units, *le.base_units);
      o.require(fp.status == FixedPointStatus::Match, std::string(f) + ": " + fp.diagnosis);
    }
    auto le = load("z12i.ext");
    auto h1 = h1_units(unit_gmodule(*le.ext, *le.ring_units));
    o.require(h1.group.is_zero() && !h1.contradiction, h1.diagnosis);
  });

  criterion(9, "Har(Z[1/2], C2 x C2) has order 16", [](Outcome& o) {
    RingPtr r = parse_ring("Z[1/2]");
    auto h = harrison_abelian(r, parse_group("product(cyclic(2),cyclic(2))"), standard_units(r));
    o.require(h.order() == 16, "order " + h.order().get_str());
    auto c0 = all_classes(h.kummer[0]);
    auto c1 = all_classes(h.kummer[1]);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    for (int k = 0; k < 4; ++k) {
      std::vector<KummerClass> a{c0[pick(rng)], c1[pick(rng)]}, b{c0[pick(rng)], c1[pick(rng)]};
      auto m = check_product_law(h, a, b);
      o.require(m.status == MorphismStatus::Iso, "product law: " + m.diagnosis);
    }
  });

  criterion(10, "certify agrees with brute-force Theta over F5 and Z/9 quadratic extensions", [](Outcome& o) {
    double certify_time = 0;
    for (const char* base : {"GF(5)", "Z/9"})
      for (const auto& ext : quadratic_extensions(base)) {
        auto t = Clock::now();
        auto c = certify(ext);
        certify_time += seconds_since(t);
        bool brute = theta_bijective_by_enumeration(ext);
        o.require((c.verdict == Verdict::Valid) == brute, ext.ring()->key() + " disagrees");
        o.require(c.verdict != Verdict::Incomplete, ext.ring()->key() + " incomplete");
      }
    o.require(certify_time < 60.0, "certification took longer than 60 s");
  });

  criterion(11, "Z[1/3][z]/(z^6+z^3+1) with units(9) is VALID", [](Outcome& o) {
    auto t = Clock::now();
    auto le = load("cyclo9.ext");
    o.require(le.ext->group()->label() == "units(9)", "group");
    o.require(certify(*le.ext).verdict == Verdict::Valid, "verdict");
    o.require(seconds_since(t) < 10.0, "took longer than 10 s");
  });

  return failures == 0 ? 0 : 1;
}
