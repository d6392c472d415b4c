#pragma once

// The finite group O_g(q) of H1 automorphisms preserving q: enumeration,
// subgroup closure with shortest-word certificates, factorization, and the
// constructive reductions onto the generators
//   T_{x_i + x_{i+2}}                                        (i = 1..g-2)
//   T_{x_i + x_{i+1}} T_{x_{i+2} + x_{i+3}} T_{x_i + ... + x_{i+3}}  (i = 1..g-3).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmq/f2core.hpp"
#include "gmq/mcgwords.hpp"

namespace gmq {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct LabeledGenerator {
  std::string label;
  H1Matrix matrix;
  // Mapping class realising the matrix, when there is one.
  std::optional<MCGWord> realisation;
};

struct GenRef {
  int index = 0;
  bool inverse = false;
  friend bool operator==(const GenRef&, const GenRef&) = default;
};

// Composition order: the last entry acts first.
using GenWord = std::vector<GenRef>;

H1Matrix replay(Genus g, const std::vector<LabeledGenerator>& gens, const GenWord& word);
std::string render_gen_word(const std::vector<LabeledGenerator>& gens, const GenWord& word);
// The mapping-class word obtained by substituting each generator's
// realisation; nullopt if some generator has none.
std::optional<MCGWord> realise(Genus g, const std::vector<LabeledGenerator>& gens,
                               const GenWord& word);
// Reversed word with inverted letters; involutive generators keep their
// plain form.
GenWord inverse_word(const std::vector<LabeledGenerator>& gens, const GenWord& word);

struct GroupElementRecord {
  H1Matrix matrix;
  GenWord certificate;
};

class GroupTable {
 public:
  GroupTable(Genus g, std::vector<LabeledGenerator> generators);

  Genus genus() const noexcept { return genus_; }
  const std::vector<LabeledGenerator>& generators() const noexcept { return generators_; }
  std::size_t order() const noexcept { return count_; }
  bool complete() const noexcept { return complete_; }
  int diameter() const noexcept { return diameter_; }

  H1Matrix matrix(std::size_t index) const;
  GenWord certificate(std::size_t index) const;
  GroupElementRecord record(std::size_t index) const;
  std::optional<std::size_t> find(const H1Matrix& m) const;
  bool contains(const H1Matrix& m) const { return find(m).has_value(); }

  // Elements sorted by column encoding; used to compare tables as sets.
  std::vector<std::vector<std::uint64_t>> sorted_keys() const;

 private:
  friend GroupTable enumerate_orthogonal(Genus g, int workers);
  friend GroupTable subgroup_closure(Genus g, std::vector<LabeledGenerator> gens,
                                     std::size_t cap, int workers);

  const std::uint64_t* cols(std::size_t index) const {
    return arena_.data() + index * static_cast<std::size_t>(genus_.value());
  }
  std::uint64_t hash_columns(const std::uint64_t* columns) const noexcept;
  // Appends the columns and returns (index, inserted). Duplicates are rolled back.
  std::pair<std::uint32_t, bool> insert(const std::uint64_t* columns);
  void grow_slots();

  Genus genus_;
  std::vector<LabeledGenerator> generators_;
  std::vector<std::uint64_t> arena_;
  std::vector<std::int64_t> parent_;  // -1 for the root
  std::vector<GenRef> via_;
  std::vector<int> depth_;
  std::size_t count_ = 0;
  bool complete_ = false;
  int diameter_ = 0;
  // Open addressing over element indices (index + 1; 0 marks an empty slot).
  std::vector<std::uint32_t> slots_;
};

inline constexpr int kEnumerationMaxGenus = 8;
inline constexpr std::size_t kDefaultClosureCap = std::size_t{1} << 24;

// All q-preserving automorphisms, by column-wise backtracking: column j is
// orthogonal to the previous columns and has q equal to q(x_j). Throws
// BudgetExceeded above genus 8.
GroupTable enumerate_orthogonal(Genus g, int workers = 1);

// BFS closure from the identity under left multiplication by the generators
// and their inverses, in listed order. Certificates are shortest words. If
// more than `cap` elements would be stored the table is returned with
// complete() == false.
GroupTable subgroup_closure(Genus g, std::vector<LabeledGenerator> gens,
                            std::size_t cap = kDefaultClosureCap, int workers = 1);

// Transvections T_{x_i + x_{i+2}} (labels "D_i") followed by the triples
// (labels "E_i"), each with its mapping-class realisation t_{d_i} and
// t_{a_i} t_{a_{i+2}} t_{c_i}.
std::vector<LabeledGenerator> reduction_generators(Genus g);
int transvection_generator_index(Genus g, int i);  // D_i
int triple_generator_index(Genus g, int i);        // E_i

// The extendable mapping-class generators t_{a_i}^2, t_{c_i}^2, t_{d_i},
// t_{a_i} t_{a_{i+2}} t_{c_i} and Y_{i,j}, labelled by their words, with
// induced matrices. Duplicate matrices are kept.
std::vector<LabeledGenerator> extendable_generators(Genus g);

struct GenerationReport {
  int genus = 0;
  std::size_t closure_order = 0;
  std::size_t enumeration_order = 0;
  bool closure_complete = false;
  bool equal = false;
  int diameter = 0;
  std::vector<std::string> generator_labels;
};

GenerationReport verify_generation(Genus g, std::size_t cap = kDefaultClosureCap,
                                   int workers = 1);

enum class FactorStatus { Found, NotMember, BudgetExhausted };
const char* to_string(FactorStatus s);

struct Factorization {
  FactorStatus status = FactorStatus::BudgetExhausted;
  GenWord word;
  std::size_t states = 0;
};

// Shortest word over the generators (and inverses) equal to m, by
// bidirectional BFS. NotMember is only reported after one side's search
// space was exhausted.
Factorization factorize(const H1Matrix& m, const std::vector<LabeledGenerator>& gens,
                        std::size_t cap = kDefaultClosureCap);

// --- Constructive reductions -------------------------------------------------

struct VectorReduction {
  H1Vector start;
  H1Vector end;   // x1 + x3
  GenWord word;   // word(start) == end
  GenWord transvection_word;  // a word equal to T_start
};

// Requires q(a) == 2. Builds the mapping onto x1 + x3 step by step:
// transvections sort the odd and even parts, and the triples collapse four
// same-parity terms, swap the parity excess, and cancel (even, odd) pairs.
VectorReduction reduce_q2_vector(const H1Vector& a);

enum class PairBranch { Generic, FullSupport };
const char* to_string(PairBranch b);

// Which member of {a, b, a+b} a reduced vector is the image of. The triple
// T_a T_b T_{a+b} only depends on this unordered set.
enum class PairSlot { A, B, Sum };
const char* to_string(PairSlot s);

struct PairReduction {
  H1Vector a;
  H1Vector b;
  H1Vector a_end;  // x1 + x2
  H1Vector b_end;  // x3 + x4 (Generic) or x3 + ... + xg (FullSupport)
  PairSlot a_end_from = PairSlot::A;
  PairSlot b_end_from = PairSlot::B;
  PairBranch branch = PairBranch::Generic;
  GenWord word;  // sends the tracked members onto (a_end, b_end)
  // T_a T_b T_{a+b} as a word in the generators.
  GenWord triple_word;
  // FullSupport only: the identity
  //   T_{x1+x2} T_{x3+..+xg} T_{x1+..+xg}
  //     = E_1 . T_{x1+x2} T_{x5+..+xg} T_{x1+x2+x5+..+xg}
  // checked as a matrix equation.
  bool identity_checked = false;
  bool identity_holds = false;
};

// Requires q(a) = q(b) = q(a+b) = 0 with a, b, a+b nonzero.
PairReduction reduce_isotropic_pair(const H1Vector& a, const H1Vector& b);

// T_a T_b T_{a+b} for an isotropic pair.
H1Matrix isotropic_triple(const H1Vector& a, const H1Vector& b);

}  // namespace gmq
