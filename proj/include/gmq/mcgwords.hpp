#pragma once

// Formal words in the mapping class group M(N_g) and their action on
// H1(N_g; Z2).
//
// Grammar (whitespace between items is optional):
//
//   word     := item*
//   item     := letter power? | '(' word ')' power?
//   letter   := 't_{' ('a'|'c'|'d') '_' index '}'
//             | 'Y_{' expr ',' expr '}'
//             | 'Y_{' alpha ',' alpha '}'
//   alpha    := 'alpha_' index | 'alpha_{' expr (',' expr)* '}'
//   index    := digits | name | '{' expr '}'
//   expr     := (digits | name) (('+'|'-') digits)?
//   power    := '^' (int | '{' int '}')
//
// Names (i, j, k, ...) are bound through a variable environment so rule
// certificates can be written as templates such as "Y_{i+2,i} t_{d_i}".
// A parenthesised group with a power is expanded into letters; a negative
// power inverts the group (reversed order, negated exponents).
//
// Composition is right to left: the rightmost letter acts first.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmq/f2core.hpp"
#include "gmq/gmform.hpp"

namespace gmq {

enum class LetterKind { TwistA, TwistC, TwistD, YHomeo, AlphaY };

struct GeneratorLetter {
  LetterKind kind = LetterKind::TwistA;
  int i = 0;  // twist index, or the leg index of Y_{i,j}
  int j = 0;  // arm index of Y_{i,j}
  std::vector<int> leg_set;  // alpha_I of Y_{alpha_I, alpha_J}, sorted
  std::vector<int> arm_set;  // alpha_J, sorted
  int exponent = 1;          // nonzero; negative means inverse

  bool inverse() const noexcept { return exponent < 0; }
  bool is_twist() const noexcept {
    return kind == LetterKind::TwistA || kind == LetterKind::TwistC ||
           kind == LetterKind::TwistD;
  }
  GeneratorLetter inverted() const;
  std::string to_string() const;

  friend bool operator==(const GeneratorLetter&, const GeneratorLetter&) = default;
};

// Index checks against the genus; throws InvalidArgument.
void validate_letter(const GeneratorLetter& letter, Genus g);

GeneratorLetter twist_a(int i, int exponent = 1);
GeneratorLetter twist_c(int i, int exponent = 1);
GeneratorLetter twist_d(int i, int exponent = 1);
GeneratorLetter y_homeo(int leg, int arm, int exponent = 1);
GeneratorLetter alpha_y(std::vector<int> leg_set, std::vector<int> arm_set,
                        int exponent = 1);

using VariableEnv = std::map<std::string, int, std::less<>>;

class MCGWord {
 public:
  MCGWord(Genus g, std::vector<GeneratorLetter> letters = {});

  static MCGWord parse(Genus g, std::string_view text, const VariableEnv& env = {});

  Genus genus() const noexcept { return genus_; }
  const std::vector<GeneratorLetter>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }

  MCGWord inverse() const;
  // this * other: other acts first.
  MCGWord operator*(const MCGWord& other) const;

  std::string to_string() const;

  friend bool operator==(const MCGWord&, const MCGWord&) = default;

 private:
  Genus genus_;
  std::vector<GeneratorLetter> letters_;
};

// Homology class of the twisting circle; nullopt for Y-letters.
//   [a_i] = x_i + x_{i+1}, [c_i] = x_i + ... + x_{i+3}, [d_i] = x_i + x_{i+2}.
std::optional<H1Vector> curve_class(const GeneratorLetter& letter, Genus g);

// Homology class of the leg of a Y-letter: x_i for Y_{i,j}, sum of x_m over
// I for Y_{alpha_I, alpha_J}; nullopt for twists.
std::optional<H1Vector> leg_class(const GeneratorLetter& letter, Genus g);
std::optional<H1Vector> arm_class(const GeneratorLetter& letter, Genus g);

H1Matrix letter_matrix(const GeneratorLetter& letter, Genus g);
H1Matrix induced_matrix(const MCGWord& w);

struct ExtendabilityVerdict {
  bool extendable = false;
  H1Matrix matrix;
  PreservationMode mode = PreservationMode::Exhaustive;
  std::optional<H1Vector> witness;
};

// A mapping class of the o-standardly embedded N_g extends over S^4 exactly
// when its action on H1 preserves q; this reports that criterion.
ExtendabilityVerdict decide_extendable(const MCGWord& w);

bool is_homologically_trivial(const MCGWord& w);

}  // namespace gmq
