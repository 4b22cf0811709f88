#include <algorithm>
#include <bit>
#include <set>

#include "doctest.h"
#include "nqrw/amalgam.hpp"
#include "nqrw/syntax.hpp"
#include "support.hpp"

using namespace nqrw;
using support::cyclic;
using support::fixture;

namespace {

const char* const kDiagrams[] = {"diagram_z3_z3_over_trivial.json", "diagram_z4_z4_over_z2.json",
                                 "diagram_z4_z6_over_z2.json",      "diagram_q3_pair_over_point.json",
                                 "diagram_single_z3.json",          "diagram_z3_identity.json"};

Term leaf(const AmalgamDiagram& d, Element g) { return Term::elem(d.elements[g]); }

Term nf(const AmalgamDiagram& d, const std::string& text) {
  return normalize_element(d, parse_amalgam_term(d, text)).term;
}

// Terms below the root that are pure in one factor.
bool has_pure_proper_subterm(const AmalgamDiagram& d, const Term& t) {
  for (const Term& a : t.args()) {
    if (a.is_app() && factor_mask(d, a) != 0) return true;
    if (has_pure_proper_subterm(d, a)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("amalgam") {
  TEST_CASE("build: renaming") {
    AmalgamDiagram d = load_diagram(fixture("diagram_z3_z3_over_trivial.json"));
    CHECK(d.kind == VarietyKind::loop);
    CHECK(d.elements == std::vector<std::string>{"e", "1_1", "2_1", "1_2", "2_2"});
    CHECK(d.factors[0].name == "Z3_1");
    CHECK(d.factors[1].name == "Z3_2");
    CHECK(d.factors[0].carrier == std::vector<std::string>{"e", "1_1", "2_1"});
    CHECK(d.identity == Element{0});
    CHECK(d.membership[0] == 0b11);
    CHECK(d.membership[3] == 0b10);
    CHECK(d.rules.size() == 12);
    CHECK_FALSE(d.signature.contains("e"));

    AmalgamDiagram z = load_diagram(fixture("diagram_z4_z6_over_z2.json"));
    CHECK(z.elements == std::vector<std::string>{"0", "1", "1_1", "3_1", "1_2", "2_2", "4_2", "5_2"});
    // base element 1 is 2 in Z4 and 3 in Z6
    CHECK(z.local[0][1] == 2);
    CHECK(z.local[1][1] == 3);
    CHECK(z.local[0][4] == AmalgamDiagram::kNone);

    // intersections are exactly the base
    for (const char* name : kDiagrams) {
      AmalgamDiagram a = load_diagram(fixture(name));
      for (std::size_t i = 0; i < a.factors.size(); ++i)
        for (std::size_t j = i + 1; j < a.factors.size(); ++j) {
          std::set<std::string> si(a.factors[i].carrier.begin(), a.factors[i].carrier.end());
          std::set<std::string> shared;
          for (const auto& x : a.factors[j].carrier)
            if (si.contains(x)) shared.insert(x);
          CHECK(shared == std::set<std::string>(a.base.carrier.begin(), a.base.carrier.end()));
        }
    }
  }

  TEST_CASE("build: errors") {
    FiniteAlgebra z2 = cyclic("Z2", 2);
    FiniteAlgebra z4 = cyclic("Z4", 4);
    FiniteAlgebra qz4 = cyclic("Z4", 4, VarietyKind::quasigroup);
    CHECK_THROWS_AS(build_amalgam(z2, {z4, qz4}, {{0, 2}, {0, 2}}), KindMismatch);
    CHECK_THROWS_AS(build_amalgam(z2, {z4, z4}, {{0, 2}, {0, 1}}), InvalidEmbedding);
    CHECK_THROWS_AS(build_amalgam(z2, {z4}, {{0, 2}, {0, 2}}), Error);
    CHECK_THROWS_AS(build_amalgam(z2, {cyclic("Z4", 4, VarietyKind::loop, 3)}, {{0, 2}}), Error);
    CHECK_NOTHROW(build_amalgam(z2, {z4, z4, z4}, {{0, 2}, {0, 2}, {0, 2}}));
  }

  TEST_CASE("normalize_element: examples") {
    AmalgamDiagram d = load_diagram(fixture("diagram_z3_z3_over_trivial.json"));
    CHECK(nf(d, "1_1") == Term::elem("1_1"));
    CHECK(nf(d, "f(1_1,1_1)") == Term::elem("2_1"));
    CHECK(nf(d, "f(1_1,2_1)") == Term::elem("e"));
    CHECK(nf(d, "Z3_2.2") == Term::elem("2_2"));

    Normalized r = normalize_element(d, parse_amalgam_term(d, "g1(f(1_1,1_2),1_2)"));
    CHECK(r.term == Term::elem("1_1"));
    REQUIRE(r.trace.size() == 1);
    CHECK(r.trace[0].label == "2.4[i=1]");

    Term mixed = parse_amalgam_term(d, "f(1_1,2_2)");
    CHECK(nf(d, "f(1_1,2_2)") == mixed);
    CHECK(amalgam_steps(d, mixed).empty());

    CHECK(nf(d, "f(e,1_2)") == Term::elem("1_2"));
    CHECK(nf(d, "f(f(1_1,2_2),e)") == mixed);

    CHECK_THROWS_AS(parse_amalgam_term(d, "f(1_1,7)"), UnknownElement);
    CHECK_THROWS_AS(parse_amalgam_term(d, "Z5.1"), UnknownElement);
    CHECK_THROWS_AS(parse_amalgam_term(d, "f(1_1"), ParseError);
  }

  TEST_CASE("single factor: every normal form is a leaf") {
    AmalgamDiagram d = load_diagram(fixture("diagram_single_z3.json"));
    for (const Term& t : term_universe(d, 5)) {
      Term r = normalize_element(d, t).term;
      CHECK(r.is_elem());
      CHECK(r == leaf(d, evaluate_in(d, 0, t)));
    }
  }

  TEST_CASE("apply_op satisfies the identities of the variety") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      CAPTURE(name);
      std::vector<Term> sample;
      for (const Term& t : term_universe(d, 3)) sample.push_back(normalize_element(d, t).term);
      std::sort(sample.begin(), sample.end());
      sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
      if (sample.size() > 24) sample.erase(sample.begin() + 24, sample.end());
      for (const Term& a : sample) {
        for (const Term& b : sample) {
          std::array<Term, 2> ab{a, b};
          Term fab = apply_op(d, "f", ab);
          // 2.3 and 2.4 for i = 1, 2
          std::array<Term, 2> s1{apply_op(d, "g1", ab), b};
          CHECK(apply_op(d, "f", s1) == a);
          std::array<Term, 2> s2{a, apply_op(d, "g2", ab)};
          CHECK(apply_op(d, "f", s2) == b);
          std::array<Term, 2> s3{fab, b};
          CHECK(apply_op(d, "g1", s3) == a);
          std::array<Term, 2> s4{a, fab};
          CHECK(apply_op(d, "g2", s4) == b);
        }
        if (d.kind == VarietyKind::loop) {
          Term e = leaf(d, *d.identity);
          for (const char* op : {"f", "g1"}) {
            std::array<Term, 2> ae{a, e};
            CHECK(apply_op(d, op, ae) == a);
          }
          for (const char* op : {"f", "g2"}) {
            std::array<Term, 2> ea{e, a};
            CHECK(apply_op(d, op, ea) == a);
          }
        }
      }
    }
  }

  TEST_CASE("normal forms are maximally collapsed and admit no step") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Term r = normalize_element(d, random_term(d, 4, seed)).term;
        CHECK(amalgam_steps(d, r).empty());
        CHECK_FALSE(has_pure_proper_subterm(d, r));
        CHECK((r.is_elem() || factor_mask(d, r) == 0));
      }
    }
  }

  TEST_CASE("strategies agree") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Term t = random_term(d, 4, seed);
        Term a = normalize_element(d, t, Strategy::innermost()).term;
        CHECK(normalize_element(d, t, Strategy::outermost()).term == a);
        CHECK(normalize_element(d, t, Strategy::random(seed)).term == a);
      }
    }
  }

  TEST_CASE("evaluation on base elements does not depend on the factor") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      for (const Term& t : term_universe(d, 5)) {
        std::uint64_t mask = factor_mask(d, t);
        if (std::popcount(mask) < 2) continue;
        std::set<Element> values;
        for (std::size_t i = 0; i < d.factors.size(); ++i)
          if (mask >> i & 1) values.insert(evaluate_in(d, i, t));
        CHECK(values.size() == 1);
        CHECK(d.membership[*values.begin()] == (std::uint64_t{1} << d.factors.size()) - 1);
      }
    }
  }

  TEST_CASE("distinct leaves stay distinct under probing to depth 2") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      std::vector<Term> leaves;
      for (Element g = 0; g < d.elements.size(); ++g) leaves.push_back(leaf(d, g));
      // depth 1 and 2 contexts: op(x, c) and op(c, x) with a second layer
      for (std::size_t a = 0; a < leaves.size(); ++a) {
        for (std::size_t b = a + 1; b < leaves.size(); ++b) {
          for (const Term& c : leaves) {
            for (const auto& [sym, arity] : d.signature.symbols()) {
              std::array<Term, 2> xa{leaves[a], c}, xb{leaves[b], c};
              Term pa = apply_op(d, sym, xa), pb = apply_op(d, sym, xb);
              CHECK(pa != pb);
              std::array<Term, 2> ya{c, pa}, yb{c, pb};
              CHECK(apply_op(d, "f", ya) != apply_op(d, "f", yb));
            }
          }
        }
      }
    }
  }

  TEST_CASE("unique normal forms") {
    for (const char* name : kDiagrams) {
      AmalgamDiagram d = load_diagram(fixture(name));
      UnfOptions opts;
      opts.max_size = 5;
      opts.trials = 200;
      UnfReport r = check_unique_normal_forms(d, opts);
      CAPTURE(name);
      CHECK(r.ok);
      CHECK(r.exhaustive_terms == term_universe(d, 5).size());
      CHECK(r.random_terms == 200);
    }
  }

  TEST_CASE("unique normal forms: serial and parallel agree") {
    AmalgamDiagram d = load_diagram(fixture("diagram_z4_z4_over_z2.json"));
    UnfOptions opts;
    opts.max_size = 4;
    opts.trials = 100;
    opts.exec = Exec::serial;
    UnfReport s = check_unique_normal_forms(d, opts);
    opts.exec = Exec::parallel;
    UnfReport p = check_unique_normal_forms(d, opts);
    CHECK(s.ok == p.ok);
    CHECK(s.exhaustive_terms == p.exhaustive_terms);
  }

  TEST_CASE("without the derived rules a mixed peak has two normal forms") {
    AmalgamDiagram d = load_diagram(fixture("diagram_z3_z3_over_trivial.json"));
    Term peak = parse_amalgam_term(d, "g1(f(1_1,g2(1_1,1_2)),g2(1_1,1_2))");
    CHECK(irreducible_reducts(d, peak) == std::vector<Term>{Term::elem("1_1")});
    d.rules.erase(d.rules.begin() + 6, d.rules.end());
    auto forms = irreducible_reducts(d, peak);
    CHECK(forms.size() == 2);
    CHECK(std::find(forms.begin(), forms.end(), Term::elem("1_1")) != forms.end());
  }

  TEST_CASE("strong amalgamation") {
    AmalgamDiagram d = load_diagram(fixture("diagram_z3_z3_over_trivial.json"));
    StrongAmalgamationReport r = check_strong_amalgamation(d);
    CHECK(r.ok);
    CHECK(r.intersection == std::vector<Term>{Term::elem("e")});
    CHECK(r.image1.size() == 3);

    StrongAmalgamationReport z = check_strong_amalgamation(load_diagram(fixture("diagram_z4_z4_over_z2.json")));
    CHECK(z.ok);
    CHECK(z.intersection.size() == 2);

    StrongAmalgamationReport same = check_strong_amalgamation(load_diagram(fixture("diagram_z3_identity.json")));
    CHECK(same.ok);
    CHECK(same.intersection == same.base_image);
    CHECK(same.intersection.size() == 3);

    CHECK_THROWS_AS(check_strong_amalgamation(load_diagram(fixture("diagram_single_z3.json"))), Error);
  }
}
