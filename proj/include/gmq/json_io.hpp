#pragma once

// JSON renderings of results. Key order is fixed by nlohmann's sorted
// object map, so equal inputs give byte-identical documents.

#include <json.hpp>

#include "gmq/f2core.hpp"
#include "gmq/gmform.hpp"
#include "gmq/groupops.hpp"
#include "gmq/mcgwords.hpp"
#include "gmq/rewrite.hpp"

namespace gmq::json_io {

using nlohmann::json;

json matrix(const H1Matrix& m);  // rows as bitstrings
json verdict(const MCGWord& w, const ExtendabilityVerdict& v);
json table(const GroupTable& t, bool with_elements);
json generation(const GenerationReport& r);
json factorization(const H1Matrix& target, const std::vector<LabeledGenerator>& gens,
                   const Factorization& f);
json rule(const RewriteRule& r);
json rule_check(const RewriteRule& r, const RuleCheck& c);
json path(const CertifiedPath& p);
json alpha(const AlphaReduction& r);
json classification(const ClassificationReport& r, bool with_members);
json vector_reduction(const std::vector<LabeledGenerator>& gens, const VectorReduction& r);
json pair_reduction(const std::vector<LabeledGenerator>& gens, const PairReduction& r);

}  // namespace gmq::json_io
