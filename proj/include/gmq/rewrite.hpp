#pragma once

// Certified symbolic rewriting on r-sequences and alpha-triples.
//
// An r-sequence spells a class x = sum eps_i x_i with one symbol per
// position: odd positions carry '+' (eps = 0) or '⊕' (eps = 1), even
// positions carry '-' or '⊖'. ASCII spellings are p, P, m, M. The coarse
// alphabet forgets the position sign: '×' (ASCII x) and '⊗' (ASCII X).
//
// Every rule carries a certificate: a word template in the index variable
// i (or i, j, k for alpha shifts) whose induced H1 action must carry the
// left-hand class to the right-hand class.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmq/f2core.hpp"
#include "gmq/gmform.hpp"
#include "gmq/mcgwords.hpp"

namespace gmq {

enum class SymbolStyle { Unicode, Ascii };

class RSequence {
 public:
  static RSequence encode(const H1Vector& v) { return RSequence(v); }
  // Accepts "[+ ⊖ ⊕ -]", "pMPm", with or without brackets and spaces.
  // Rejects symbols of the wrong position parity.
  static RSequence parse(Genus g, std::string_view text);

  Genus genus() const noexcept { return v_.genus(); }
  H1Vector decode() const { return v_; }
  std::string to_string(SymbolStyle style = SymbolStyle::Unicode) const;

  friend bool operator==(const RSequence&, const RSequence&) = default;

 private:
  explicit RSequence(H1Vector v) : v_(v) {}
  H1Vector v_;
};

inline RSequence rseq_encode(const H1Vector& v) { return RSequence::encode(v); }
inline H1Vector rseq_decode(const RSequence& s) { return s.decode(); }

enum class RuleFamily {
  RCircleSwap,      // three-symbol equivalences through t_{d_i}
  RCircleTriple,    // four-symbol equivalences through the triple twist
  TwistAAction,     // action of t_{a_i} on coarse two-symbol windows
  TwistCAction,     // action of t_{c_i} on coarse four-symbol windows
  AlphaShift,       // alpha_{i,j,k} index shifts
};

const char* to_string(RuleFamily f);

struct RewriteRule {
  std::string id;
  RuleFamily family = RuleFamily::RCircleSwap;
  std::string case_label;  // position in the source table, e.g. "(11)"
  // Window patterns, bit t = symbol at position anchor + t.
  int window_length = 0;
  std::uint32_t lhs = 0;
  std::uint32_t rhs = 0;
  std::string lhs_symbols;  // display form of the window
  std::string rhs_symbols;
  bool coarse = false;
  bool no_op = false;
  bool bidirectional = false;
  std::string certificate;  // word template
  // AlphaShift only: which index moves ('i', 'j' or 'k').
  char shifted = 0;

  // Anchor range [1, max_anchor(g)] for windowed rules.
  int max_anchor(Genus g) const;
};

struct AlphaTriple {
  int i = 0, j = 0, k = 0;
  AlphaTriple() = default;
  AlphaTriple(int i_, int j_, int k_);
  H1Vector class_in(Genus g) const { return H1Vector::from_indices(g, {i, j, k}); }
  std::string to_string() const;
  friend bool operator==(const AlphaTriple&, const AlphaTriple&) = default;
};

// Rule inventory. Windowed rules are instantiated at every anchor
// 1..max_anchor(g); they act at the support level, so the paired sign
// variants of a rule coincide on classes.
const std::vector<RewriteRule>& builtin_rules();
std::vector<RewriteRule> rules_of(RuleFamily f);
const RewriteRule& rule_by_id(std::string_view id);

struct RuleInstance {
  const RewriteRule* rule = nullptr;
  int anchor = 0;                      // windowed rules
  std::optional<AlphaTriple> triple;   // alpha shifts: the triple before the move
};

std::vector<RuleInstance> builtin_rule_tables(Genus g);
std::vector<RuleInstance> instances_of(const RewriteRule& rule, Genus g);

H1Vector instance_lhs(const RuleInstance& inst, Genus g);
H1Vector instance_rhs(const RuleInstance& inst, Genus g);
MCGWord instance_certificate(const RuleInstance& inst, Genus g);

// Positions touched by the instance (the window, or {m-2, m} for a shift of m).
std::vector<int> instance_window(const RuleInstance& inst);

struct RuleCheck {
  bool pass = true;
  int instances_checked = 0;
  bool locality_ok = true;
  std::optional<RuleInstance> failing;
  std::optional<H1Matrix> failing_matrix;
  std::string detail;
};

// For every instance at genus g: the certificate's induced matrix carries
// the left class to the right class, and every twist axis in the
// certificate lies inside the window.
RuleCheck verify_rule_consistency(const RewriteRule& rule, Genus g);

std::vector<RSequence> canonical_targets(Genus g);

struct PathStep {
  std::string rule_id;
  int anchor = 0;
  bool forward = true;  // false: right-hand side to left-hand side
};

struct CertifiedPath {
  RSequence start;
  RSequence end;
  std::vector<PathStep> steps;
  MCGWord certificate;  // induced_matrix(certificate) carries start to end
};

// Equivalence graph on all 2^g r-sequences whose edges are instances of the
// two r-circle families, in both directions.
class RuleGraph {
 public:
  explicit RuleGraph(Genus g);

  Genus genus() const noexcept { return g_; }
  struct Edge {
    std::uint64_t to;
    int instance;
    bool forward;
  };
  const std::vector<Edge>& edges(std::uint64_t node) const { return adjacency_[node]; }
  const std::vector<RuleInstance>& instances() const noexcept { return instances_; }
  std::size_t node_count() const noexcept { return adjacency_.size(); }

 private:
  Genus g_;
  std::vector<RuleInstance> instances_;
  std::vector<std::vector<Edge>> adjacency_;
};

inline constexpr int kRuleGraphMaxGenus = 16;

class NoCanonicalTarget : public Error {
 public:
  using Error::Error;
};

// Shortest path in the rule graph from s to a canonical target. Throws
// NoCanonicalTarget if the component of s has none.
CertifiedPath reduce_rseq(const RSequence& s);
CertifiedPath reduce_rseq(const RuleGraph& graph, const RSequence& s);

struct CirclePredicates {
  bool is_mcircle = false;              // odd support
  bool complement_orientable = false;   // full support
  bool leg_eligible = false;            // M-circle with non-orientable complement
};

CirclePredicates circle_predicates(const RSequence& s);

enum class AlphaClass { Alpha1, Alpha2 };
const char* to_string(AlphaClass c);

struct AlphaStep {
  std::string rule_id;
  AlphaTriple before;
  AlphaTriple after;
};

struct AlphaReduction {
  AlphaTriple start;
  AlphaTriple terminal;
  AlphaClass label = AlphaClass::Alpha1;
  std::vector<AlphaStep> steps;
  MCGWord certificate;
};

// The eight terminal triples and their classes.
const std::vector<std::pair<AlphaTriple, AlphaClass>>& alpha_terminals();

// Applies the index shifts (priority i, then j, then k) until a terminal is
// reached. Requires k <= g.
AlphaReduction reduce_alpha(const AlphaTriple& t, Genus g);

struct ComponentInfo {
  std::vector<std::uint64_t> members;  // sorted
  std::vector<std::uint64_t> canonical_members;
  Z4Value q;
  int support_parity = 0;
  bool q_constant = true;
  bool parity_constant = true;
};

struct ClassificationReport {
  int genus = 0;
  std::vector<ComponentInfo> components;
  bool all_have_canonical = true;
  bool q_constant = true;
  bool parity_constant = true;
};

ClassificationReport classify_rseq_components(Genus g);

}  // namespace gmq
