#include "gmq/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace gmq {

namespace {

constexpr std::string_view kPlus = "+";
constexpr std::string_view kMinus = "−";
constexpr std::string_view kOPlus = "⊕";
constexpr std::string_view kOMinus = "⊖";
constexpr std::string_view kCross = "×";
constexpr std::string_view kOTimes = "⊗";

// One decoded symbol: circled or not, and the position parity it belongs to
// (1 odd, 0 even, -1 coarse).
struct Symbol {
  bool circled;
  int parity;
  std::size_t width;
};

std::optional<Symbol> read_symbol(std::string_view s) {
  auto starts = [&](std::string_view p) { return s.substr(0, p.size()) == p; };
  if (starts(kOPlus)) return Symbol{true, 1, kOPlus.size()};
  if (starts(kOMinus)) return Symbol{true, 0, kOMinus.size()};
  if (starts(kMinus)) return Symbol{false, 0, kMinus.size()};
  if (starts(kCross)) return Symbol{false, -1, kCross.size()};
  if (starts(kOTimes)) return Symbol{true, -1, kOTimes.size()};
  switch (s.front()) {
    case '+':
    case 'p':
      return Symbol{false, 1, 1};
    case '-':
    case 'm':
      return Symbol{false, 0, 1};
    case 'P':
      return Symbol{true, 1, 1};
    case 'M':
      return Symbol{true, 0, 1};
    case 'x':
      return Symbol{false, -1, 1};
    case 'X':
      return Symbol{true, -1, 1};
    default:
      return std::nullopt;
  }
}

bool is_separator(char c) { return c == ' ' || c == '\t' || c == ',' || c == '[' || c == ']'; }

std::vector<Symbol> read_symbols(std::string_view text) {
  std::vector<Symbol> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (is_separator(text[pos])) {
      ++pos;
      continue;
    }
    auto sym = read_symbol(text.substr(pos));
    if (!sym) throw ParseError("unrecognised r-sequence symbol", pos);
    out.push_back(*sym);
    pos += sym->width;
  }
  return out;
}

std::string_view fine_symbol(int position, bool circled, SymbolStyle style) {
  bool odd = position % 2 == 1;
  if (style == SymbolStyle::Ascii) {
    if (odd) return circled ? "P" : "p";
    return circled ? "M" : "m";
  }
  if (odd) return circled ? kOPlus : kPlus;
  return circled ? kOMinus : kMinus;
}

// Window pattern from a display string; circled symbols give 1 bits.
std::pair<std::uint32_t, int> pattern_bits(std::string_view text) {
  auto syms = read_symbols(text);
  std::uint32_t bits = 0;
  for (std::size_t t = 0; t < syms.size(); ++t)
    if (syms[t].circled) bits |= std::uint32_t{1} << t;
  return {bits, static_cast<int>(syms.size())};
}

RewriteRule windowed(std::string id, RuleFamily family, std::string label, std::string lhs,
                     std::string rhs, std::string certificate, bool coarse, bool bidirectional) {
  RewriteRule r;
  r.id = std::move(id);
  r.family = family;
  r.case_label = std::move(label);
  auto [lb, ll] = pattern_bits(lhs);
  auto [rb, rl] = pattern_bits(rhs);
  if (ll != rl) throw std::logic_error("rule window lengths differ: " + r.id);
  r.window_length = ll;
  r.lhs = lb;
  r.rhs = rb;
  r.lhs_symbols = std::move(lhs);
  r.rhs_symbols = std::move(rhs);
  r.coarse = coarse;
  r.bidirectional = bidirectional;
  r.certificate = std::move(certificate);
  return r;
}

RewriteRule no_op(std::string id, std::string label, std::string pattern) {
  RewriteRule r = windowed(std::move(id), RuleFamily::TwistCAction, std::move(label), pattern,
                           pattern, "t_{c_i}", true, false);
  r.no_op = true;
  return r;
}

RewriteRule alpha_shift(char m) {
  RewriteRule r;
  r.id = std::string("alpha-shift-") + m;
  r.family = RuleFamily::AlphaShift;
  r.case_label = std::string(1, m);
  r.shifted = m;
  std::string v(1, m);
  r.certificate = "Y_{" + v + "," + v + "-2}^{-1} Y_{" + v + "-1," + v + "-2}^{-1} t_{d_{" + v +
                  "-2}}";
  r.window_length = 3;
  r.lhs = 0b100;
  r.rhs = 0b001;
  return r;
}

std::vector<RewriteRule> make_rules() {
  using F = RuleFamily;
  std::vector<RewriteRule> rules;
  const std::string swap12 = "Y_{i+2,i} Y_{i+1,i} t_{d_i}";
  const std::string swap34 = "Y_{i+2,i+1} Y_{i+1,i+2} t_{d_i}";
  rules.push_back(windowed("rcircle-swap-1", F::RCircleSwap, "1", "− + ⊖", "⊖ + −", swap12, false, true));
  rules.push_back(windowed("rcircle-swap-2", F::RCircleSwap, "2", "+ − ⊕", "⊕ − +", swap12, false, true));
  rules.push_back(windowed("rcircle-swap-3", F::RCircleSwap, "3", "− ⊕ ⊖", "⊖ ⊕ −", swap34, false, true));
  rules.push_back(windowed("rcircle-swap-4", F::RCircleSwap, "4", "+ ⊖ ⊕", "⊕ ⊖ +", swap34, false, true));

  const std::string tri12 = "Y_{i+3,i+1} Y_{i+2,i+1} t_{a_i}^{-2} (t_{a_i} t_{a_{i+2}} t_{c_i})";
  const std::string tri34 = "Y_{i,i+2} Y_{i+1,i+2} t_{a_{i+2}}^2 (t_{a_i} t_{a_{i+2}} t_{c_i})^{-1}";
  const std::string tri56 = "Y_{i+1,i} (t_{a_i} t_{a_{i+2}} t_{c_i}) Y_{i+2,i+3}^{-1}";
  rules.push_back(windowed("rcircle-triple-1", F::RCircleTriple, "1", "− ⊕ ⊖ ⊕", "− ⊕ − +", tri12, false, true));
  rules.push_back(windowed("rcircle-triple-2", F::RCircleTriple, "2", "+ ⊖ ⊕ ⊖", "+ ⊖ + −", tri12, false, true));
  rules.push_back(windowed("rcircle-triple-3", F::RCircleTriple, "3", "⊖ ⊕ ⊖ +", "− + ⊖ +", tri34, false, true));
  rules.push_back(windowed("rcircle-triple-4", F::RCircleTriple, "4", "⊕ ⊖ ⊕ −", "+ − ⊕ −", tri34, false, true));
  rules.push_back(windowed("rcircle-triple-5", F::RCircleTriple, "5", "− ⊕ − ⊕", "⊖ + ⊖ +", tri56, false, true));
  rules.push_back(windowed("rcircle-triple-6", F::RCircleTriple, "6", "+ ⊖ + ⊖", "⊕ − ⊕ −", tri56, false, true));

  rules.push_back(windowed("twist-a-1", F::TwistAAction, "1", "⊗ ×", "× ⊗", "Y_{i,i+1} t_{a_i}^{-1}", true, false));
  rules.push_back(windowed("twist-a-2", F::TwistAAction, "2", "× ⊗", "⊗ ×", "Y_{i+1,i} t_{a_i}", true, false));

  struct CCase {
    int n;
    const char* lhs;
    const char* rhs;
    const char* cert;
  };
  const CCase cases[] = {
      {1, "⊗ × × ×", "× ⊗ ⊗ ⊗", "Y_{i,i+1} Y_{i+2,i+3} Y_{i+1,i+3} Y_{i+1,i+2}^{-1} t_{c_i}^{-1}"},
      {2, "× ⊗ × ×", "⊗ × ⊗ ⊗", "Y_{i+1,i} Y_{i+2,i+3} t_{c_i}"},
      {4, "× × ⊗ ×", "⊗ ⊗ × ⊗", "Y_{i+2,i+3} Y_{i+1,i} t_{c_i}^{-1}"},
      {5, "⊗ × ⊗ ×", "⊗ × ⊗ ×",
       "Y_{i+1,i+2} Y_{i,i+2} Y_{i+3,i+2}^{-1} Y_{i+2,i+3}^{-1} Y_{i,i+3}^{-1} t_{c_i}^{-1}"},
      {7, "⊗ ⊗ ⊗ ×", "× × × ⊗", "Y_{i,i+3} Y_{i+1,i+3} Y_{i+2,i+3} t_{c_i}^{-1}"},
      {8, "× × × ⊗", "⊗ ⊗ ⊗ ×", "Y_{i+3,i+2} Y_{i+1,i} Y_{i+2,i} Y_{i+2,i+1}^{-1} t_{c_i}"},
      {9, "⊗ × × ⊗", "⊗ × × ⊗",
       "Y_{i+2,i+3} Y_{i+1,i} Y_{i+3,i} Y_{i+3,i+1}^{-1} Y_{i+3,i+2} Y_{i+2,i+3} Y_{i+1,i+3} "
       "Y_{i+1,i+2}^{-1} Y_{i,i+3} Y_{i,i+2}^{-1} Y_{i,i+1} t_{c_i}^{-1}"},
      {10, "× ⊗ × ⊗", "× ⊗ × ⊗",
       "Y_{i+2,i+1} Y_{i+3,i+1} Y_{i,i+3}^{-1} Y_{i+1,i}^{-1} Y_{i+3,i}^{-1} t_{c_i}"},
      {11, "⊗ ⊗ × ⊗", "× × ⊗ ×",
       "Y_{i,i+2} Y_{i+1,i+2} Y_{i+3,i+2} Y_{i+2,i} Y_{i+2,i+1}^{-1} t_{c_i}"},
      {13, "⊗ × ⊗ ⊗", "× ⊗ × ×",
       "Y_{i+3,i+1} Y_{i+2,i+1} Y_{i,i+1} Y_{i+1,i+3} Y_{i+1,i+2}^{-1} t_{c_i}^{-1}"},
      {14, "× ⊗ ⊗ ⊗", "⊗ × × ×", "Y_{i+3,i} Y_{i+2,i} Y_{i+1,i} t_{c_i}"},
  };
  const std::pair<int, const char*> no_ops[] = {
      {3, "⊗ ⊗ × ×"}, {6, "× ⊗ ⊗ ×"}, {12, "× × ⊗ ⊗"}, {15, "⊗ ⊗ ⊗ ⊗"}};
  // Keep the source numbering order (1)..(15).
  std::vector<RewriteRule> twist_c;
  for (const auto& c : cases)
    twist_c.push_back(windowed("twist-c-" + std::to_string(c.n), F::TwistCAction,
                               "(" + std::to_string(c.n) + ")", c.lhs, c.rhs, c.cert, true, false));
  for (const auto& [n, pat] : no_ops)
    twist_c.push_back(no_op("twist-c-" + std::to_string(n), "(" + std::to_string(n) + ")", pat));
  std::sort(twist_c.begin(), twist_c.end(), [](const RewriteRule& a, const RewriteRule& b) {
    return std::stoi(a.case_label.substr(1)) < std::stoi(b.case_label.substr(1));
  });
  rules.insert(rules.end(), twist_c.begin(), twist_c.end());

  for (char m : {'i', 'j', 'k'}) rules.push_back(alpha_shift(m));
  return rules;
}

// Index moved by an alpha shift, if the gap condition allows it.
bool shift_applies(char m, const AlphaTriple& t) {
  switch (m) {
    case 'i':
      return t.i > 2;
    case 'j':
      return t.i < t.j - 2;
    case 'k':
      return t.j < t.k - 2;
    default:
      return false;
  }
}

AlphaTriple shifted(char m, const AlphaTriple& t) {
  AlphaTriple out = t;
  if (m == 'i') out.i -= 2;
  if (m == 'j') out.j -= 2;
  if (m == 'k') out.k -= 2;
  return out;
}

int moved_index(char m, const AlphaTriple& t) { return m == 'i' ? t.i : m == 'j' ? t.j : t.k; }

VariableEnv env_for(const RuleInstance& inst) {
  if (inst.triple) return {{"i", inst.triple->i}, {"j", inst.triple->j}, {"k", inst.triple->k}};
  return {{"i", inst.anchor}};
}

bool is_windowed(const RewriteRule& r) { return r.family != RuleFamily::AlphaShift; }

}  // namespace

RSequence RSequence::parse(Genus g, std::string_view text) {
  auto syms = read_symbols(text);
  if (static_cast<int>(syms.size()) != g.value())
    throw ParseError("r-sequence has " + std::to_string(syms.size()) + " symbols, genus is " +
                         std::to_string(g.value()),
                     0);
  std::uint64_t bits = 0;
  for (std::size_t t = 0; t < syms.size(); ++t) {
    int position = static_cast<int>(t) + 1;
    if (syms[t].parity < 0)
      throw ParseError("coarse symbol in an r-sequence at position " + std::to_string(position), t);
    if (syms[t].parity != position % 2)
      throw ParseError("symbol parity does not match position " + std::to_string(position), t);
    if (syms[t].circled) bits |= std::uint64_t{1} << t;
  }
  return RSequence(H1Vector::from_bits(g, bits));
}

std::string RSequence::to_string(SymbolStyle style) const {
  std::string out = "[";
  for (int p = 1; p <= genus().value(); ++p) {
    if (p > 1) out += ' ';
    out += fine_symbol(p, v_.coeff(p), style);
  }
  out += ']';
  return out;
}

const char* to_string(RuleFamily f) {
  switch (f) {
    case RuleFamily::RCircleSwap:
      return "rcircle-swap";
    case RuleFamily::RCircleTriple:
      return "rcircle-triple";
    case RuleFamily::TwistAAction:
      return "twist-a";
    case RuleFamily::TwistCAction:
      return "twist-c";
    case RuleFamily::AlphaShift:
      return "alpha-shift";
  }
  return "?";
}

int RewriteRule::max_anchor(Genus g) const {
  if (family == RuleFamily::AlphaShift) return 0;
  return std::max(0, g.value() - window_length + 1);
}

AlphaTriple::AlphaTriple(int i_, int j_, int k_) : i(i_), j(j_), k(k_) {
  if (!(1 <= i && i < j && j < k))
    throw InvalidArgument("alpha triple needs 1 <= i < j < k, got " + to_string());
}

std::string AlphaTriple::to_string() const {
  return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

const std::vector<RewriteRule>& builtin_rules() {
  static const std::vector<RewriteRule> rules = make_rules();
  return rules;
}

std::vector<RewriteRule> rules_of(RuleFamily f) {
  std::vector<RewriteRule> out;
  for (const auto& r : builtin_rules())
    if (r.family == f) out.push_back(r);
  return out;
}

const RewriteRule& rule_by_id(std::string_view id) {
  for (const auto& r : builtin_rules())
    if (r.id == id) return r;
  throw InvalidArgument("unknown rule id: " + std::string(id));
}

std::vector<RuleInstance> instances_of(const RewriteRule& rule, Genus g) {
  std::vector<RuleInstance> out;
  if (is_windowed(rule)) {
    for (int a = 1; a <= rule.max_anchor(g); ++a) out.push_back({&rule, a, std::nullopt});
    return out;
  }
  int n = g.value();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        AlphaTriple t(i, j, k);
        if (shift_applies(rule.shifted, t)) out.push_back({&rule, moved_index(rule.shifted, t), t});
      }
  return out;
}

std::vector<RuleInstance> builtin_rule_tables(Genus g) {
  std::vector<RuleInstance> out;
  for (const auto& r : builtin_rules()) {
    auto inst = instances_of(r, g);
    out.insert(out.end(), inst.begin(), inst.end());
  }
  return out;
}

H1Vector instance_lhs(const RuleInstance& inst, Genus g) {
  if (inst.triple) return inst.triple->class_in(g);
  return H1Vector::from_bits(g, std::uint64_t{inst.rule->lhs} << (inst.anchor - 1));
}

H1Vector instance_rhs(const RuleInstance& inst, Genus g) {
  if (inst.triple) return shifted(inst.rule->shifted, *inst.triple).class_in(g);
  return H1Vector::from_bits(g, std::uint64_t{inst.rule->rhs} << (inst.anchor - 1));
}

MCGWord instance_certificate(const RuleInstance& inst, Genus g) {
  return MCGWord::parse(g, inst.rule->certificate, env_for(inst));
}

std::vector<int> instance_window(const RuleInstance& inst) {
  std::vector<int> out;
  int first = inst.triple ? inst.anchor - 2 : inst.anchor;
  for (int t = 0; t < inst.rule->window_length; ++t) out.push_back(first + t);
  return out;
}

RuleCheck verify_rule_consistency(const RewriteRule& rule, Genus g) {
  RuleCheck check;
  for (const auto& inst : instances_of(rule, g)) {
    ++check.instances_checked;
    MCGWord cert = instance_certificate(inst, g);
    auto window = instance_window(inst);
    std::uint64_t window_mask = 0;
    for (int p : window) window_mask |= std::uint64_t{1} << (p - 1);
    for (const auto& letter : cert.letters()) {
      auto axis = curve_class(letter, g);
      if (axis && (axis->bits() & ~window_mask) != 0) {
        check.locality_ok = false;
        check.pass = false;
        check.failing = inst;
        check.detail = "twist " + letter.to_string() + " leaves the window";
        return check;
      }
    }
    H1Matrix m = induced_matrix(cert);
    H1Vector image = m.apply(instance_lhs(inst, g));
    if (image != instance_rhs(inst, g)) {
      check.pass = false;
      check.failing = inst;
      check.failing_matrix = m;
      check.detail = "certificate sends " + instance_lhs(inst, g).to_string() + " to " +
                     image.to_string() + ", expected " + instance_rhs(inst, g).to_string();
      return check;
    }
  }
  return check;
}

std::vector<RSequence> canonical_targets(Genus g) {
  int n = g.value();
  std::vector<std::uint64_t> bits;
  if (n == 1) {
    bits = {0b0, 0b1};
  } else if (n == 2) {
    bits = {0b00, 0b01, 0b10, 0b11};
  } else {
    bits = {0b000, 0b001, 0b010, 0b011, 0b101, g.mask()};
  }
  std::vector<RSequence> out;
  for (auto b : bits) out.push_back(RSequence::encode(H1Vector::from_bits(g, b)));
  return out;
}

RuleGraph::RuleGraph(Genus g) : g_(g) {
  if (g.value() > kRuleGraphMaxGenus)
    throw InvalidArgument("rule graph limited to genus " + std::to_string(kRuleGraphMaxGenus));
  for (const auto& r : builtin_rules()) {
    if (r.family != RuleFamily::RCircleSwap && r.family != RuleFamily::RCircleTriple) continue;
    auto inst = instances_of(r, g);
    instances_.insert(instances_.end(), inst.begin(), inst.end());
  }
  std::uint64_t nodes = std::uint64_t{1} << g.value();
  adjacency_.resize(nodes);
  for (std::uint64_t v = 0; v < nodes; ++v) {
    for (std::size_t idx = 0; idx < instances_.size(); ++idx) {
      const auto& inst = instances_[idx];
      const auto& r = *inst.rule;
      int shift = inst.anchor - 1;
      std::uint64_t wmask = ((std::uint64_t{1} << r.window_length) - 1) << shift;
      std::uint64_t w = (v & wmask) >> shift;
      std::uint64_t flip = std::uint64_t{r.lhs ^ r.rhs} << shift;
      if (w == r.lhs) adjacency_[v].push_back({v ^ flip, static_cast<int>(idx), true});
      if (r.bidirectional && w == r.rhs && r.lhs != r.rhs)
        adjacency_[v].push_back({v ^ flip, static_cast<int>(idx), false});
    }
  }
}

CertifiedPath reduce_rseq(const RSequence& s) {
  RuleGraph graph(s.genus());
  return reduce_rseq(graph, s);
}

CertifiedPath reduce_rseq(const RuleGraph& graph, const RSequence& s) {
  Genus g = graph.genus();
  require_same_genus(g, s.genus());
  std::vector<bool> canonical(graph.node_count(), false);
  for (const auto& t : canonical_targets(g)) canonical[t.decode().bits()] = true;

  struct Parent {
    std::int64_t node = -1;
    int edge = -1;
  };
  std::vector<Parent> parent(graph.node_count());
  std::vector<bool> seen(graph.node_count(), false);
  std::uint64_t start = s.decode().bits();
  std::deque<std::uint64_t> queue{start};
  seen[start] = true;
  std::optional<std::uint64_t> found;
  while (!queue.empty()) {
    std::uint64_t v = queue.front();
    queue.pop_front();
    if (canonical[v]) {
      found = v;
      break;
    }
    const auto& edges = graph.edges(v);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      std::uint64_t w = edges[e].to;
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = {static_cast<std::int64_t>(v), static_cast<int>(e)};
      queue.push_back(w);
    }
  }
  if (!found)
    throw NoCanonicalTarget("no canonical target reachable from " + s.to_string());

  std::vector<std::pair<std::uint64_t, RuleGraph::Edge>> rev;
  for (std::uint64_t v = *found; v != start;) {
    auto p = parent[v];
    auto from = static_cast<std::uint64_t>(p.node);
    rev.emplace_back(from, graph.edges(from)[p.edge]);
    v = from;
  }
  std::reverse(rev.begin(), rev.end());

  CertifiedPath path{s, RSequence::encode(H1Vector::from_bits(g, *found)), {}, MCGWord(g)};
  for (const auto& [from, edge] : rev) {
    const auto& inst = graph.instances()[edge.instance];
    path.steps.push_back({inst.rule->id, inst.anchor, edge.forward});
    MCGWord cert = instance_certificate(inst, g);
    if (!edge.forward) cert = cert.inverse();
    path.certificate = cert * path.certificate;
  }
  if (induced_matrix(path.certificate).apply(s.decode()) != path.end.decode())
    throw std::logic_error("certified path failed replay from " + s.to_string());
  return path;
}

CirclePredicates circle_predicates(const RSequence& s) {
  H1Vector v = s.decode();
  CirclePredicates p;
  p.is_mcircle = v.weight() % 2 == 1;
  p.complement_orientable = v.bits() == s.genus().mask();
  p.leg_eligible = p.is_mcircle && !p.complement_orientable;
  return p;
}

const char* to_string(AlphaClass c) { return c == AlphaClass::Alpha1 ? "alpha_1" : "alpha_2"; }

const std::vector<std::pair<AlphaTriple, AlphaClass>>& alpha_terminals() {
  static const std::vector<std::pair<AlphaTriple, AlphaClass>> terminals = {
      {{1, 3, 4}, AlphaClass::Alpha1}, {{1, 2, 3}, AlphaClass::Alpha1},
      {{2, 3, 5}, AlphaClass::Alpha1}, {{2, 4, 6}, AlphaClass::Alpha1},
      {{1, 3, 5}, AlphaClass::Alpha2}, {{1, 2, 4}, AlphaClass::Alpha2},
      {{2, 3, 4}, AlphaClass::Alpha2}, {{2, 4, 5}, AlphaClass::Alpha2},
  };
  return terminals;
}

AlphaReduction reduce_alpha(const AlphaTriple& t, Genus g) {
  AlphaTriple start(t.i, t.j, t.k);
  if (t.k > g.value())
    throw InvalidArgument("alpha triple " + t.to_string() + " exceeds genus " +
                          std::to_string(g.value()));
  AlphaReduction red{start, start, AlphaClass::Alpha1, {}, MCGWord(g)};
  const int bound = (t.i + t.j + t.k) / 2;
  AlphaTriple cur = start;
  for (;;) {
    auto term = std::find_if(alpha_terminals().begin(), alpha_terminals().end(),
                             [&](const auto& p) { return p.first == cur; });
    if (term != alpha_terminals().end()) {
      red.terminal = cur;
      red.label = term->second;
      break;
    }
    if (static_cast<int>(red.steps.size()) >= bound)
      throw std::logic_error("alpha reduction exceeded its step bound from " + t.to_string());
    char m = 0;
    for (char c : {'i', 'j', 'k'})
      if (shift_applies(c, cur)) {
        m = c;
        break;
      }
    if (m == 0) throw std::logic_error("alpha reduction stuck at " + cur.to_string());
    const RewriteRule& rule = rule_by_id(std::string("alpha-shift-") + m);
    RuleInstance inst{&rule, moved_index(m, cur), cur};
    AlphaTriple next = shifted(m, cur);
    red.steps.push_back({rule.id, cur, next});
    red.certificate = instance_certificate(inst, g) * red.certificate;
    cur = next;
  }
  if (induced_matrix(red.certificate).apply(start.class_in(g)) != red.terminal.class_in(g))
    throw std::logic_error("alpha certificate failed replay from " + t.to_string());
  return red;
}

ClassificationReport classify_rseq_components(Genus g) {
  if (g.value() > 12) throw InvalidArgument("component classification is limited to genus 12");
  RuleGraph graph(g);
  std::vector<bool> canonical(graph.node_count(), false);
  for (const auto& t : canonical_targets(g)) canonical[t.decode().bits()] = true;

  ClassificationReport report;
  report.genus = g.value();
  std::vector<int> component(graph.node_count(), -1);
  for (std::uint64_t root = 0; root < graph.node_count(); ++root) {
    if (component[root] >= 0) continue;
    int id = static_cast<int>(report.components.size());
    ComponentInfo info;
    H1Vector rv = H1Vector::from_bits(g, root);
    info.q = q_eval(rv);
    info.support_parity = rv.weight() % 2;
    std::deque<std::uint64_t> queue{root};
    component[root] = id;
    while (!queue.empty()) {
      std::uint64_t v = queue.front();
      queue.pop_front();
      info.members.push_back(v);
      H1Vector hv = H1Vector::from_bits(g, v);
      if (q_eval(hv) != info.q) info.q_constant = false;
      if (hv.weight() % 2 != info.support_parity) info.parity_constant = false;
      if (canonical[v]) info.canonical_members.push_back(v);
      for (const auto& e : graph.edges(v)) {
        if (component[e.to] >= 0) continue;
        component[e.to] = id;
        queue.push_back(e.to);
      }
    }
    std::sort(info.members.begin(), info.members.end());
    std::sort(info.canonical_members.begin(), info.canonical_members.end());
    report.all_have_canonical = report.all_have_canonical && !info.canonical_members.empty();
    report.q_constant = report.q_constant && info.q_constant;
    report.parity_constant = report.parity_constant && info.parity_constant;
    report.components.push_back(std::move(info));
  }
  return report;
}

}  // namespace gmq
