#include <doctest.h>

#include <set>

#include "gmq/rewrite.hpp"
#include "oracle.hpp"

using namespace gmq;

namespace {

RSequence S(int g, const char* text) { return RSequence::parse(Genus(g), text); }

}  // namespace

TEST_SUITE("rewrite") {
  TEST_CASE("r-sequence encoding") {
    Genus g(7);
    RSequence s = RSequence::encode(H1Vector::from_indices(g, {2, 3, 6, 7}));
    CHECK(s.to_string() == "[+ ⊖ ⊕ − + ⊖ ⊕]");
    CHECK(s.to_string(SymbolStyle::Ascii) == "[p M P m p M P]");
    CHECK(RSequence::encode(H1Vector::zero(Genus(4))).to_string() == "[+ − + −]");
    CHECK(S(7, "[+ ⊖ ⊕ − + ⊖ ⊕]") == s);
    CHECK(S(7, "pMPmpMP") == s);
    CHECK(S(7, "[+ ⊖ ⊕ - + ⊖ ⊕]") == s);
  }

  TEST_CASE("r-sequence parse errors") {
    CHECK_THROWS_AS(S(3, "[- + -]"), ParseError);    // parity
    CHECK_THROWS_AS(S(3, "[+ − + −]"), ParseError);  // length
    CHECK_THROWS_AS(S(2, "[× ⊗]"), ParseError);      // coarse
    CHECK_THROWS_AS(S(2, "[+ q]"), ParseError);
  }

  TEST_CASE("encode and decode are inverse, g <= 10") {
    for (int n = 1; n <= 10; ++n) {
      Genus g(n);
      for (std::uint64_t v = 0; v <= g.mask(); ++v) {
        H1Vector h = H1Vector::from_bits(g, v);
        RSequence s = rseq_encode(h);
        REQUIRE(rseq_decode(s) == h);
        REQUIRE(RSequence::parse(g, s.to_string()) == s);
        REQUIRE(RSequence::parse(g, s.to_string(SymbolStyle::Ascii)) == s);
      }
    }
  }

  TEST_CASE("rule inventory") {
    CHECK(rules_of(RuleFamily::RCircleSwap).size() == 4);
    CHECK(rules_of(RuleFamily::RCircleTriple).size() == 6);
    CHECK(rules_of(RuleFamily::TwistAAction).size() == 2);
    auto tc = rules_of(RuleFamily::TwistCAction);
    REQUIRE(tc.size() == 15);
    int noops = 0;
    for (std::size_t n = 0; n < tc.size(); ++n) {
      CHECK(tc[n].case_label == "(" + std::to_string(n + 1) + ")");
      noops += tc[n].no_op;
    }
    CHECK(noops == 4);
    CHECK(rules_of(RuleFamily::AlphaShift).size() == 3);
    CHECK(instances_of(rule_by_id("rcircle-swap-1"), Genus(5)).size() == 3);
    std::size_t swaps = 0;
    for (const auto& inst : builtin_rule_tables(Genus(5)))
      swaps += inst.rule->family == RuleFamily::RCircleSwap;
    CHECK(swaps == 12);
  }

  TEST_CASE("rule instance examples") {
    Genus g(4);
    RuleInstance swap{&rule_by_id("rcircle-swap-1"), 1, std::nullopt};
    CHECK(instance_lhs(swap, g) == H1Vector::parse(g, "x3"));
    CHECK(instance_rhs(swap, g) == H1Vector::parse(g, "x1"));
    CHECK(induced_matrix(instance_certificate(swap, g)).apply(instance_lhs(swap, g)) ==
          H1Vector::parse(g, "x1"));
    RuleInstance c11{&rule_by_id("twist-c-11"), 1, std::nullopt};
    CHECK(instance_lhs(c11, g) == H1Vector::parse(g, "x1+x2+x4"));
    CHECK(instance_rhs(c11, g) == H1Vector::parse(g, "x3"));
  }

  TEST_CASE("every rule is consistent at every anchor, g <= 10") {
    for (int n = 1; n <= 10; ++n)
      for (const auto& r : builtin_rules()) {
        RuleCheck c = verify_rule_consistency(r, Genus(n));
        INFO(r.id << " at genus " << n << ": " << c.detail);
        REQUIRE(c.pass);
        REQUIRE(c.locality_ok);
      }
  }

  TEST_CASE("no-op and fixed-class cases") {
    RuleCheck c3 = verify_rule_consistency(rule_by_id("twist-c-3"), Genus(6));
    CHECK(c3.pass);
    CHECK(c3.instances_checked == 3);
    const RewriteRule& c5 = rule_by_id("twist-c-5");
    CHECK(c5.lhs == c5.rhs);
    CHECK(verify_rule_consistency(c5, Genus(5)).pass);
  }

  TEST_CASE("a corrupted certificate is reported with its anchor") {
    RewriteRule bad = rule_by_id("rcircle-swap-1");
    bad.certificate = "Y_{i+2,i} t_{a_i}";
    RuleCheck c = verify_rule_consistency(bad, Genus(5));
    CHECK_FALSE(c.pass);
    REQUIRE(c.failing);
    CHECK(c.failing->anchor == 1);
    CHECK(c.failing_matrix);
    RewriteRule far = rule_by_id("rcircle-swap-1");
    far.certificate = "t_{d_{i+1}}";
    RuleCheck f = verify_rule_consistency(far, Genus(5));
    CHECK_FALSE(f.locality_ok);
  }

  TEST_CASE("canonical targets") {
    auto show = [](const std::vector<RSequence>& v) {
      std::set<std::string> out;
      for (const auto& s : v) out.insert(s.to_string());
      return out;
    };
    CHECK(show(canonical_targets(Genus(1))) == std::set<std::string>{"[+]", "[⊕]"});
    CHECK(show(canonical_targets(Genus(2))) ==
          std::set<std::string>{"[+ −]", "[⊕ −]", "[+ ⊖]", "[⊕ ⊖]"});
    CHECK(show(canonical_targets(Genus(5))) ==
          std::set<std::string>{"[+ − + − +]", "[⊕ − + − +]", "[+ ⊖ + − +]", "[⊕ ⊖ + − +]",
                                "[⊕ − ⊕ − +]", "[⊕ ⊖ ⊕ ⊖ ⊕]"});
    CHECK(show(canonical_targets(Genus(4))).count("[⊕ ⊖ ⊕ ⊖]") == 1);
  }

  TEST_CASE("reduce_rseq examples") {
    CertifiedPath p = reduce_rseq(S(3, "[+ − ⊕]"));
    CHECK(p.end.to_string() == "[⊕ − +]");
    CHECK(p.steps.size() == 1);
    CertifiedPath q = reduce_rseq(S(2, "[⊕ −]"));
    CHECK(q.steps.empty());
    CHECK(q.end == q.start);
    CHECK(reduce_rseq(S(3, "[+ ⊖ ⊕]")).end.to_string() == "[⊕ ⊖ +]");
  }

  TEST_CASE("every r-sequence reduces with a replayed certificate, g <= 10") {
    for (int n = 1; n <= 10; ++n) {
      Genus g(n);
      RuleGraph graph(g);
      std::set<std::uint64_t> targets;
      for (const auto& t : canonical_targets(g)) targets.insert(t.decode().bits());
      for (std::uint64_t v = 0; v <= g.mask(); ++v) {
        RSequence s = RSequence::encode(H1Vector::from_bits(g, v));
        CertifiedPath p = reduce_rseq(graph, s);
        REQUIRE(targets.count(p.end.decode().bits()) == 1);
        REQUIRE(induced_matrix(p.certificate).apply(s.decode()) == p.end.decode());
        REQUIRE(oracle::q(p.end.decode().bits()) == oracle::q(v));
        REQUIRE(p.end.decode().weight() % 2 == s.decode().weight() % 2);
      }
    }
  }

  TEST_CASE("circle predicates") {
    auto a = circle_predicates(S(3, "[⊕ − +]"));
    CHECK(a.is_mcircle);
    CHECK_FALSE(a.complement_orientable);
    CHECK(a.leg_eligible);
    auto b = circle_predicates(S(3, "[⊕ ⊖ ⊕]"));
    CHECK(b.is_mcircle);
    CHECK(b.complement_orientable);
    CHECK_FALSE(b.leg_eligible);
    CHECK_FALSE(circle_predicates(S(4, "[+ − + −]")).is_mcircle);
  }

  TEST_CASE("alpha reduction examples") {
    Genus g(7);
    AlphaReduction a = reduce_alpha(AlphaTriple(1, 2, 3), g);
    CHECK(a.terminal == AlphaTriple(1, 2, 3));
    CHECK(a.label == AlphaClass::Alpha1);
    CHECK(a.steps.empty());
    AlphaReduction b = reduce_alpha(AlphaTriple(2, 4, 5), g);
    CHECK(b.label == AlphaClass::Alpha2);
    AlphaReduction c = reduce_alpha(AlphaTriple(3, 5, 7), g);
    CHECK(c.terminal == AlphaTriple(1, 3, 5));
    CHECK(c.label == AlphaClass::Alpha2);
    REQUIRE(c.steps.size() == 3);
    CHECK(c.steps[0].after == AlphaTriple(1, 5, 7));
    CHECK(c.steps[1].after == AlphaTriple(1, 3, 7));
    CHECK_THROWS_AS(AlphaTriple(2, 2, 3), InvalidArgument);
    CHECK_THROWS_AS(reduce_alpha(AlphaTriple(1, 2, 8), g), InvalidArgument);
  }

  TEST_CASE("alpha reduction terminates on the eight terminals, g <= 12") {
    Genus g(12);
    std::set<std::string> seen;
    for (int i = 1; i <= 12; ++i)
      for (int j = i + 1; j <= 12; ++j)
        for (int k = j + 1; k <= 12; ++k) {
          AlphaReduction r = reduce_alpha(AlphaTriple(i, j, k), g);
          REQUIRE(static_cast<int>(r.steps.size()) <= (i + j + k) / 2);
          REQUIRE(induced_matrix(r.certificate).apply(AlphaTriple(i, j, k).class_in(g)) ==
                  r.terminal.class_in(g));
          // The label follows q: alpha_1 classes have q = 1, alpha_2 classes q = 3.
          int qt = oracle::q(r.terminal.class_in(g).bits());
          REQUIRE(qt == (r.label == AlphaClass::Alpha1 ? 1 : 3));
          REQUIRE(qt == oracle::q(AlphaTriple(i, j, k).class_in(g).bits()));
          seen.insert(r.terminal.to_string());
        }
    CHECK(seen.size() == 8);
  }

  TEST_CASE("component classification") {
    ClassificationReport g1 = classify_rseq_components(Genus(1));
    CHECK(g1.components.size() == 2);
    for (int n = 1; n <= 10; ++n) {
      ClassificationReport r = classify_rseq_components(Genus(n));
      CHECK(r.all_have_canonical);
      CHECK(r.q_constant);
      CHECK(r.parity_constant);
      std::size_t total = 0;
      for (const auto& c : r.components) total += c.members.size();
      CHECK(total == (std::size_t{1} << n));
    }
    CHECK_THROWS_AS(classify_rseq_components(Genus(13)), InvalidArgument);
  }
}
