#include "gmq/json_io.hpp"

namespace gmq::json_io {

namespace {

json gen_word(const std::vector<LabeledGenerator>& gens, const GenWord& w) {
  json letters = json::array();
  for (const auto& r : w) letters.push_back({{"generator", gens.at(r.index).label}, {"inverse", r.inverse}});
  return letters;
}

json realisation(Genus g, const std::vector<LabeledGenerator>& gens, const GenWord& w) {
  auto real = realise(g, gens, w);
  return real ? json(real->to_string()) : json(nullptr);
}

json members(Genus g, const std::vector<std::uint64_t>& bits) {
  json out = json::array();
  for (auto b : bits) out.push_back(RSequence::encode(H1Vector::from_bits(g, b)).to_string());
  return out;
}

}  // namespace

json matrix(const H1Matrix& m) { return m.to_rows(); }

json verdict(const MCGWord& w, const ExtendabilityVerdict& v) {
  json out = {{"word", w.to_string()},
              {"genus", w.genus().value()},
              {"matrix", matrix(v.matrix)},
              {"extendable", v.extendable},
              {"mode", to_string(v.mode)}};
  if (v.witness) {
    out["witness"] = v.witness->to_string();
    out["witness_q"] = q_eval(*v.witness).value();
    out["witness_image_q"] = q_eval(v.matrix.apply(*v.witness)).value();
  }
  return out;
}

json table(const GroupTable& t, bool with_elements) {
  json labels = json::array();
  for (const auto& gen : t.generators()) labels.push_back(gen.label);
  json out = {{"genus", t.genus().value()},
              {"generators", labels},
              {"order", t.order()},
              {"diameter", t.diameter()},
              {"complete", t.complete()}};
  if (with_elements) {
    json elems = json::array();
    for (std::size_t i = 0; i < t.order(); ++i) {
      auto rec = t.record(i);
      json e = {{"matrix", matrix(rec.matrix)}};
      // Enumerated tables carry no generators, hence no words.
      if (!t.generators().empty() || i == 0)
        e["word"] = render_gen_word(t.generators(), rec.certificate);
      elems.push_back(e);
    }
    out["elements"] = elems;
  }
  return out;
}

json generation(const GenerationReport& r) {
  return {{"genus", r.genus},
          {"generators", r.generator_labels},
          {"closure_order", r.closure_order},
          {"enumeration_order", r.enumeration_order},
          {"closure_complete", r.closure_complete},
          {"equal", r.equal},
          {"diameter", r.diameter}};
}

json factorization(const H1Matrix& target, const std::vector<LabeledGenerator>& gens,
                   const Factorization& f) {
  json out = {{"genus", target.genus().value()},
              {"matrix", matrix(target)},
              {"status", to_string(f.status)},
              {"states", f.states}};
  if (f.status == FactorStatus::Found) {
    out["word"] = render_gen_word(gens, f.word);
    out["letters"] = gen_word(gens, f.word);
    out["realisation"] = realisation(target.genus(), gens, f.word);
  }
  return out;
}

json rule(const RewriteRule& r) {
  json out = {{"id", r.id},
              {"family", to_string(r.family)},
              {"case", r.case_label},
              {"certificate", r.certificate},
              {"bidirectional", r.bidirectional},
              {"no_op", r.no_op},
              {"coarse", r.coarse}};
  if (r.family == RuleFamily::AlphaShift) {
    out["shifted_index"] = std::string(1, r.shifted);
  } else {
    out["window"] = r.lhs_symbols;
    out["replacement"] = r.rhs_symbols;
  }
  return out;
}

json rule_check(const RewriteRule& r, const RuleCheck& c) {
  json out = {{"rule", r.id},
              {"pass", c.pass},
              {"instances", c.instances_checked},
              {"locality", c.locality_ok}};
  if (c.failing) {
    out["failing_anchor"] = c.failing->anchor;
    if (c.failing->triple) out["failing_triple"] = c.failing->triple->to_string();
    out["detail"] = c.detail;
  }
  if (c.failing_matrix) out["failing_matrix"] = matrix(*c.failing_matrix);
  return out;
}

json path(const CertifiedPath& p) {
  json steps = json::array();
  for (const auto& s : p.steps)
    steps.push_back({{"rule", s.rule_id}, {"anchor", s.anchor},
                     {"direction", s.forward ? "forward" : "backward"}});
  return {{"genus", p.start.genus().value()},
          {"start", p.start.to_string()},
          {"start_ascii", p.start.to_string(SymbolStyle::Ascii)},
          {"start_class", p.start.decode().to_string()},
          {"end", p.end.to_string()},
          {"end_ascii", p.end.to_string(SymbolStyle::Ascii)},
          {"end_class", p.end.decode().to_string()},
          {"steps", steps},
          {"certificate", p.certificate.to_string()}};
}

json alpha(const AlphaReduction& r) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"rule", s.rule_id}, {"from", s.before.to_string()}, {"to", s.after.to_string()}});
  return {{"genus", r.certificate.genus().value()},
          {"start", r.start.to_string()},
          {"terminal", r.terminal.to_string()},
          {"class", to_string(r.label)},
          {"steps", steps},
          {"certificate", r.certificate.to_string()}};
}

json classification(const ClassificationReport& r, bool with_members) {
  Genus g(r.genus);
  json comps = json::array();
  for (const auto& c : r.components) {
    json item = {{"size", c.members.size()},
                 {"q", c.q.value()},
                 {"support_parity", c.support_parity},
                 {"q_constant", c.q_constant},
                 {"parity_constant", c.parity_constant},
                 {"canonical", members(g, c.canonical_members)}};
    if (with_members) item["members"] = members(g, c.members);
    comps.push_back(item);
  }
  return {{"genus", r.genus},
          {"components", comps},
          {"all_have_canonical", r.all_have_canonical},
          {"q_constant", r.q_constant},
          {"parity_constant", r.parity_constant}};
}

json vector_reduction(const std::vector<LabeledGenerator>& gens, const VectorReduction& r) {
  Genus g = r.start.genus();
  return {{"genus", g.value()},
          {"start", r.start.to_string()},
          {"end", r.end.to_string()},
          {"word", render_gen_word(gens, r.word)},
          {"realisation", realisation(g, gens, r.word)},
          {"transvection_word", render_gen_word(gens, r.transvection_word)}};
}

json pair_reduction(const std::vector<LabeledGenerator>& gens, const PairReduction& r) {
  Genus g = r.a.genus();
  json out = {{"genus", g.value()},
              {"a", r.a.to_string()},
              {"b", r.b.to_string()},
              {"a_end", r.a_end.to_string()},
              {"b_end", r.b_end.to_string()},
              {"a_end_from", to_string(r.a_end_from)},
              {"b_end_from", to_string(r.b_end_from)},
              {"branch", to_string(r.branch)},
              {"word", render_gen_word(gens, r.word)},
              {"triple_word", render_gen_word(gens, r.triple_word)}};
  if (r.identity_checked) out["identity_holds"] = r.identity_holds;
  return out;
}

}  // namespace gmq::json_io
