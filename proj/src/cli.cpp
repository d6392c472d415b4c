#include "gmq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gmq/groupops.hpp"
#include "gmq/json_io.hpp"
#include "gmq/mcgwords.hpp"
#include "gmq/rewrite.hpp"

namespace gmq::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::optional<int> genus;
  std::string format = "text";
  std::size_t cap = kDefaultClosureCap;
  int workers = 1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

Genus require_genus(const RunConfig& cfg) {
  if (!cfg.genus) throw UsageError("this command needs -g/--genus");
  return Genus(*cfg.genus);
}

// Plain-text rendering of a result document: one "key: value" line per
// scalar, nested objects indented, arrays of scalars on one line.
void write_text(std::ostream& out, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto all_scalar = [](const json& a) {
    return std::all_of(a.begin(), a.end(), [](const json& v) { return v.is_primitive(); });
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      out << pad << it.key() << ":\n";
      write_text(out, v, indent + 2);
    } else if (v.is_array() && all_scalar(v)) {
      out << pad << it.key() << ":";
      for (const auto& e : v) out << ' ' << scalar(e);
      out << '\n';
    } else if (v.is_array()) {
      out << pad << it.key() << ":\n";
      for (const auto& e : v) {
        if (e.is_object()) {
          out << pad << "  -\n";
          write_text(out, e, indent + 4);
        } else {
          out << pad << "  - " << scalar(e) << '\n';
        }
      }
    } else {
      out << pad << it.key() << ": " << scalar(v) << '\n';
    }
  }
}

void emit(std::ostream& out, const RunConfig& cfg, const json& j) {
  if (cfg.format == "json")
    out << j.dump(2) << '\n';
  else
    write_text(out, j);
}

// --- lemma checks -------------------------------------------------------------

struct LemmaResult {
  json report;
  bool verified = true;
  bool budget = false;
};

const std::vector<std::pair<std::string, std::string>>& lemma_names() {
  static const std::vector<std::pair<std::string, std::string>> names = {
      {"thm4.1", "generator-pin"},  {"4.4", "G-g-eq-r-circle"},
      {"4.6", "product-Y-homeo"},   {"4.8", "gen-Og-os-red"},
      {"4.10", "gamma2-short"},
  };
  return names;
}

std::string canonical_lemma_id(const std::string& id) {
  for (const auto& [num, name] : lemma_names())
    if (id == num || id == name) return num;
  throw UsageError("unknown lemma id: " + id);
}

json check_rules(const std::vector<RuleFamily>& families, Genus g, bool& ok) {
  json checks = json::array();
  for (const auto& r : builtin_rules()) {
    if (std::find(families.begin(), families.end(), r.family) == families.end()) continue;
    RuleCheck c = verify_rule_consistency(r, g);
    ok = ok && c.pass;
    checks.push_back(json_io::rule_check(r, c));
  }
  return checks;
}

LemmaResult lemma_rcircle(Genus g) {
  LemmaResult res;
  json rules = check_rules({RuleFamily::RCircleSwap, RuleFamily::RCircleTriple}, g, res.verified);
  ClassificationReport cls = classify_rseq_components(g);
  RuleGraph graph(g);
  std::size_t replayed = 0;
  json failures = json::array();
  for (std::uint64_t v = 0; v < graph.node_count(); ++v) {
    RSequence s = RSequence::encode(H1Vector::from_bits(g, v));
    try {
      reduce_rseq(graph, s);
      ++replayed;
    } catch (const NoCanonicalTarget&) {
      failures.push_back(s.to_string());
    }
  }
  res.verified = res.verified && cls.all_have_canonical && cls.q_constant &&
                 cls.parity_constant && failures.empty();
  json targets = json::array();
  for (const auto& t : canonical_targets(g)) targets.push_back(t.to_string());
  res.report = {{"rules", rules},
                {"components", cls.components.size()},
                {"all_have_canonical", cls.all_have_canonical},
                {"q_constant", cls.q_constant},
                {"parity_constant", cls.parity_constant},
                {"canonical_targets", targets},
                {"paths_replayed", replayed}};
  if (!failures.empty()) res.report["unreduced"] = failures;
  return res;
}

LemmaResult lemma_twist_tables(Genus g) {
  LemmaResult res;
  json rules = check_rules({RuleFamily::TwistAAction, RuleFamily::TwistCAction}, g, res.verified);
  std::vector<std::string> labels;
  for (const auto& r : rules_of(RuleFamily::TwistCAction)) labels.push_back(r.case_label);
  bool complete = labels.size() == 15;
  for (int n = 1; n <= 15 && complete; ++n)
    complete = labels[static_cast<std::size_t>(n - 1)] == "(" + std::to_string(n) + ")";
  res.verified = res.verified && complete;
  res.report = {{"rules", rules}, {"twist_c_cases_complete", complete}};
  if (g.value() < 4) res.report["note"] = "twist-c windows need genus 4; no instances checked";
  return res;
}

LemmaResult lemma_generation(Genus g, const RunConfig& cfg) {
  LemmaResult res;
  if (g.value() > kEnumerationMaxGenus) {
    res.budget = true;
    res.verified = false;
    res.report = {{"reason", "enumeration is limited to genus " + std::to_string(kEnumerationMaxGenus)}};
    return res;
  }
  GenerationReport gen = verify_generation(g, cfg.cap, cfg.workers);
  if (!gen.closure_complete) {
    res.budget = true;
    res.verified = false;
    res.report = json_io::generation(gen);
    return res;
  }
  std::size_t q2 = 0, pairs = 0, full_support = 0;
  bool identities = true;
  json failures = json::array();
  for (std::uint64_t bits = 1; bits <= g.mask(); ++bits) {
    H1Vector a = H1Vector::from_bits(g, bits);
    if (q_eval(a) != Z4Value(2)) continue;
    try {
      reduce_q2_vector(a);
      ++q2;
    } catch (const std::logic_error& e) {
      failures.push_back({{"vector", a.to_string()}, {"error", e.what()}});
    }
  }
  if (g.value() <= 6) {
    for (std::uint64_t ab = 1; ab <= g.mask(); ++ab)
      for (std::uint64_t bb = 1; bb <= g.mask(); ++bb) {
        if (ab == bb) continue;
        H1Vector a = H1Vector::from_bits(g, ab), b = H1Vector::from_bits(g, bb);
        if (q_eval(a) != Z4Value(0) || q_eval(b) != Z4Value(0) || q_eval(a + b) != Z4Value(0))
          continue;
        try {
          PairReduction pr = reduce_isotropic_pair(a, b);
          ++pairs;
          if (pr.branch == PairBranch::FullSupport) {
            ++full_support;
            identities = identities && pr.identity_holds;
          }
        } catch (const std::logic_error& e) {
          failures.push_back({{"pair", a.to_string() + ", " + b.to_string()}, {"error", e.what()}});
        }
      }
  }
  res.verified = gen.equal && failures.empty() && identities;
  res.report = json_io::generation(gen);
  res.report["q2_vectors_reduced"] = q2;
  res.report["isotropic_pairs_reduced"] = pairs;
  res.report["full_support_pairs"] = full_support;
  res.report["full_support_identity_holds"] = identities;
  if (!failures.empty()) res.report["failures"] = failures;
  return res;
}

LemmaResult lemma_alpha(Genus g) {
  LemmaResult res;
  json rules = check_rules({RuleFamily::AlphaShift}, g, res.verified);
  std::map<std::string, std::size_t> terminal_counts;
  std::size_t triples = 0;
  json failures = json::array();
  for (int i = 1; i <= g.value(); ++i)
    for (int j = i + 1; j <= g.value(); ++j)
      for (int k = j + 1; k <= g.value(); ++k) {
        try {
          AlphaReduction r = reduce_alpha(AlphaTriple(i, j, k), g);
          ++terminal_counts[r.terminal.to_string()];
          ++triples;
        } catch (const std::logic_error& e) {
          failures.push_back({{"triple", AlphaTriple(i, j, k).to_string()}, {"error", e.what()}});
        }
      }
  json classes = json::object();
  for (const auto& [t, cls] : alpha_terminals()) {
    Z4Value q = q_eval(t.class_in(Genus(std::max(6, g.value()))));
    classes[t.to_string()] = {{"class", to_string(cls)}, {"q", q.value()}};
  }
  res.verified = res.verified && failures.empty();
  res.report = {{"rules", rules},
                {"triples_reduced", triples},
                {"terminal_counts", terminal_counts},
                {"terminals", classes}};
  if (!failures.empty()) res.report["failures"] = failures;
  return res;
}

LemmaResult lemma_generator_images(Genus g, const RunConfig& cfg) {
  LemmaResult res;
  auto gens = extendable_generators(g);
  auto reds = reduction_generators(g);
  json non_extendable = json::array();
  for (const auto& gen : gens) {
    ExtendabilityVerdict v = decide_extendable(*gen.realisation);
    if (!v.extendable) non_extendable.push_back(gen.label);
  }
  bool images_match = true;
  for (const auto& r : reds)
    images_match = images_match && induced_matrix(*r.realisation) == r.matrix;
  res.report = {{"generators", gens.size()},
                {"non_extendable", non_extendable},
                {"images_match_reduction_generators", images_match}};
  res.verified = non_extendable.empty() && images_match;
  if (g.value() > kEnumerationMaxGenus) {
    res.budget = true;
    res.verified = false;
    res.report["reason"] = "enumeration is limited to genus " + std::to_string(kEnumerationMaxGenus);
    return res;
  }
  GroupTable closure = subgroup_closure(g, gens, cfg.cap, cfg.workers);
  if (!closure.complete()) {
    res.budget = true;
    res.verified = false;
    res.report["closure_order_partial"] = closure.order();
    return res;
  }
  GroupTable all = enumerate_orthogonal(g, cfg.workers);
  bool equal = closure.sorted_keys() == all.sorted_keys();
  res.report["image_order"] = closure.order();
  res.report["enumeration_order"] = all.order();
  res.report["image_equals_group"] = equal;
  res.verified = res.verified && equal;
  return res;
}

// --- argument helpers ---------------------------------------------------------

H1Matrix parse_matrix_rows(Genus g, const std::string& text) {
  std::vector<std::string> rows;
  std::stringstream ss(text);
  for (std::string row; std::getline(ss, row, ',');) {
    row.erase(std::remove(row.begin(), row.end(), ' '), row.end());
    rows.push_back(row);
  }
  const int n = g.value();
  if (static_cast<int>(rows.size()) != n)
    throw UsageError("matrix needs " + std::to_string(n) + " comma-separated rows");
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(n), 0);
  for (int r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != n) throw UsageError("matrix row has the wrong length");
    for (int c = 0; c < n; ++c) {
      if (row[static_cast<std::size_t>(c)] == '1')
        cols[static_cast<std::size_t>(c)] |= std::uint64_t{1} << r;
      else if (row[static_cast<std::size_t>(c)] != '0')
        throw UsageError("matrix entries must be 0 or 1");
    }
  }
  return H1Matrix::from_columns(g, cols);
}

int count_symbols(const std::string& text) {
  // Genus inferred from an r-sequence: count symbols ignoring separators and
  // UTF-8 continuation bytes.
  int n = 0;
  for (unsigned char c : text) {
    if (c == ' ' || c == '[' || c == ']' || c == ',' || c == '\t') continue;
    if ((c & 0xC0) == 0x80) continue;
    ++n;
  }
  return n;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guillou-Marin form and mapping-class computations on H1(N_g; Z2)", "gmq"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-g,--genus", cfg.genus, "number of crosscaps")->check(CLI::Range(1, 64));
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--cap", cfg.cap, "node cap for closures and searches")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 256));
  };

  std::string word, vector_text, second_vector, lemma_id, matrix_text, rseq_text;
  std::vector<std::string> vectors;
  std::vector<int> triple;
  bool with_elements = false, closure_mode = false, with_members = false;

  auto* eval_form = app.add_subcommand("eval-form", "evaluate q on a homology class");
  add_common(eval_form);
  eval_form->add_option("vector", vector_text, "class such as x1+x3 or a bitstring")->required();

  auto* act = app.add_subcommand("act", "induced H1 action of a word");
  add_common(act);
  act->add_option("word", word, "mapping-class word")->required();
  act->add_option("vectors", vectors, "classes to map");

  auto* extendable = app.add_subcommand("extendable", "decide extendability of a word");
  add_common(extendable);
  extendable->add_option("word", word, "mapping-class word")->required();

  auto* factorize_cmd = app.add_subcommand("factorize", "shortest word over the reduction generators");
  add_common(factorize_cmd);
  factorize_cmd->add_option("word", word, "mapping-class word whose action is factored");
  factorize_cmd->add_option("--matrix", matrix_text, "matrix rows, comma separated");

  auto* enumerate = app.add_subcommand("enumerate", "enumerate the q-preserving group");
  add_common(enumerate);
  enumerate->add_flag("--elements", with_elements, "list elements");
  enumerate->add_flag("--closure", closure_mode, "close the reduction generators instead");

  auto* verify = app.add_subcommand("verify-lemma", "machine-check a lemma at one genus");
  add_common(verify);
  verify->add_option("lemma", lemma_id, "4.4, 4.6, 4.8, 4.10, thm4.1 or a lemma name")->required();

  auto* reduce_rseq_cmd = app.add_subcommand("reduce-rseq", "certified path to a canonical r-sequence");
  add_common(reduce_rseq_cmd);
  reduce_rseq_cmd->add_option("sequence", rseq_text, "r-sequence such as \"[+ - P]\"")->required();

  auto* reduce_alpha_cmd = app.add_subcommand("reduce-alpha", "reduce an alpha triple");
  add_common(reduce_alpha_cmd);
  reduce_alpha_cmd->add_option("indices", triple, "i j k")->expected(3)->required();

  auto* reduce_q2 = app.add_subcommand("reduce-q2", "constructive reduction of a vector or isotropic pair");
  add_common(reduce_q2);
  reduce_q2->add_option("a", vector_text, "vector with q = 2, or first member of a pair")->required();
  reduce_q2->add_option("b", second_vector, "second member of an isotropic pair");

  auto* classify = app.add_subcommand("classify-rseq", "components of the r-sequence rule graph");
  add_common(classify);
  classify->add_flag("--members", with_members, "list component members");

  auto* rules = app.add_subcommand("rules", "export the rule table");
  add_common(rules);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*eval_form) {
      Genus g = require_genus(cfg);
      H1Vector v = H1Vector::parse(g, vector_text);
      Z4Value q = q_eval(v);
      emit(out, cfg, {{"genus", g.value()}, {"vector", v.to_string()}, {"q", q.value()},
                      {"q_signed", q.to_signed_string()}});
      return kOk;
    }
    if (*act) {
      Genus g = require_genus(cfg);
      MCGWord w = MCGWord::parse(g, word);
      H1Matrix m = induced_matrix(w);
      json images = json::array();
      for (const auto& t : vectors) {
        H1Vector v = H1Vector::parse(g, t);
        images.push_back({{"vector", v.to_string()}, {"image", m.apply(v).to_string()}});
      }
      emit(out, cfg, {{"genus", g.value()}, {"word", w.to_string()}, {"matrix", json_io::matrix(m)},
                      {"images", images}});
      return kOk;
    }
    if (*extendable) {
      Genus g = require_genus(cfg);
      MCGWord w = MCGWord::parse(g, word);
      emit(out, cfg, json_io::verdict(w, decide_extendable(w)));
      return kOk;
    }
    if (*factorize_cmd) {
      Genus g = require_genus(cfg);
      if (word.empty() == matrix_text.empty())
        throw UsageError("factorize needs exactly one of a word or --matrix");
      H1Matrix m = word.empty() ? parse_matrix_rows(g, matrix_text)
                                : induced_matrix(MCGWord::parse(g, word));
      auto gens = reduction_generators(g);
      Factorization f = factorize(m, gens, cfg.cap);
      emit(out, cfg, json_io::factorization(m, gens, f));
      return f.status == FactorStatus::BudgetExhausted ? kBudget : kOk;
    }
    if (*enumerate) {
      Genus g = require_genus(cfg);
      if (closure_mode) {
        GroupTable t = subgroup_closure(g, reduction_generators(g), cfg.cap, cfg.workers);
        emit(out, cfg, json_io::table(t, with_elements));
        return t.complete() ? kOk : kBudget;
      }
      GroupTable t = enumerate_orthogonal(g, cfg.workers);
      emit(out, cfg, json_io::table(t, with_elements));
      return kOk;
    }
    if (*verify) {
      Genus g = require_genus(cfg);
      std::string id = canonical_lemma_id(lemma_id);
      LemmaResult res;
      if (id == "4.4") res = lemma_rcircle(g);
      else if (id == "4.6") res = lemma_twist_tables(g);
      else if (id == "4.8") res = lemma_generation(g, cfg);
      else if (id == "4.10") res = lemma_alpha(g);
      else res = lemma_generator_images(g, cfg);
      std::string name;
      for (const auto& [num, n] : lemma_names())
        if (num == id) name = n;
      json doc = {{"lemma", id}, {"name", name}, {"genus", g.value()},
                  {"verified", res.verified}, {"budget_exhausted", res.budget},
                  {"report", res.report}};
      emit(out, cfg, doc);
      if (res.budget) return kBudget;
      return res.verified ? kOk : kFalsified;
    }
    if (*reduce_rseq_cmd) {
      Genus g = cfg.genus ? Genus(*cfg.genus) : Genus(count_symbols(rseq_text));
      RSequence s = RSequence::parse(g, rseq_text);
      CertifiedPath p = reduce_rseq(s);
      json doc = json_io::path(p);
      doc["predicates"] = {{"is_mcircle", circle_predicates(p.start).is_mcircle},
                           {"complement_orientable", circle_predicates(p.start).complement_orientable},
                           {"leg_eligible", circle_predicates(p.start).leg_eligible}};
      emit(out, cfg, doc);
      return kOk;
    }
    if (*reduce_alpha_cmd) {
      AlphaTriple t(triple.at(0), triple.at(1), triple.at(2));
      Genus g = cfg.genus ? Genus(*cfg.genus) : Genus(t.k);
      emit(out, cfg, json_io::alpha(reduce_alpha(t, g)));
      return kOk;
    }
    if (*reduce_q2) {
      Genus g = require_genus(cfg);
      auto gens = reduction_generators(g);
      H1Vector a = H1Vector::parse(g, vector_text);
      if (second_vector.empty()) {
        emit(out, cfg, json_io::vector_reduction(gens, reduce_q2_vector(a)));
      } else {
        H1Vector b = H1Vector::parse(g, second_vector);
        emit(out, cfg, json_io::pair_reduction(gens, reduce_isotropic_pair(a, b)));
      }
      return kOk;
    }
    if (*classify) {
      Genus g = require_genus(cfg);
      ClassificationReport r = classify_rseq_components(g);
      emit(out, cfg, json_io::classification(r, with_members));
      return r.all_have_canonical && r.q_constant && r.parity_constant ? kOk : kFalsified;
    }
    if (*rules) {
      json list = json::array();
      for (const auto& r : builtin_rules()) {
        json item = json_io::rule(r);
        if (cfg.genus) item["instances"] = instances_of(r, Genus(*cfg.genus)).size();
        list.push_back(item);
      }
      emit(out, cfg, {{"rules", list}});
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const NoCanonicalTarget& e) {
    err << "falsified: " << e.what() << '\n';
    emit(out, cfg, {{"falsified", true}, {"detail", e.what()}});
    return kFalsified;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    err << "falsified: " << e.what() << '\n';
    emit(out, cfg, {{"falsified", true}, {"detail", e.what()}});
    return kFalsified;
  }
  return kUsage;
}

}  // namespace gmq::cli
