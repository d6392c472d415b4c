#include "gmq/mcgwords.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace gmq {

namespace {

std::string render_index(int v) {
  std::string s = std::to_string(v);
  return s.size() == 1 ? s : "{" + s + "}";
}

std::string render_power(int exponent) {
  if (exponent == 1) return "";
  return "^{" + std::to_string(exponent) + "}";
}

std::string render_set(const std::vector<int>& set) {
  if (set.size() == 1) return "alpha_" + render_index(set.front());
  std::string out = "alpha_{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(set[k]);
  }
  return out + "}";
}

class WordParser {
 public:
  WordParser(Genus g, std::string_view text, const VariableEnv& env)
      : g_(g), s_(text), env_(env) {}

  std::vector<GeneratorLetter> parse() {
    auto letters = parse_sequence();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return letters;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(std::string_view token) {
    if (s_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  std::vector<GeneratorLetter> parse_sequence() {
    std::vector<GeneratorLetter> out;
    for (;;) {
      skip_ws();
      if (pos_ == s_.size() || peek(')')) return out;
      auto item = parse_item();
      out.insert(out.end(), item.begin(), item.end());
    }
  }

  std::vector<GeneratorLetter> parse_item() {
    if (accept("(")) {
      std::size_t open = pos_ - 1;
      auto inner = parse_sequence();
      skip_ws();
      if (!accept(")")) {
        pos_ = open;
        fail("unbalanced '('");
      }
      int power = parse_power();
      std::vector<GeneratorLetter> base = inner;
      if (power < 0) {
        base.clear();
        for (auto it = inner.rbegin(); it != inner.rend(); ++it) {
          base.push_back(it->inverted());
        }
      }
      std::vector<GeneratorLetter> out;
      for (int k = 0; k < std::abs(power); ++k) out.insert(out.end(), base.begin(), base.end());
      return out;
    }
    std::size_t start = pos_;
    GeneratorLetter letter = parse_letter();
    letter.exponent = parse_power();
    try {
      validate_letter(letter, g_);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), start);
    }
    return {letter};
  }

  int parse_power() {
    if (!accept("^")) return 1;
    bool braced = accept("{");
    int sign = 1;
    if (accept("-")) sign = -1;
    else accept("+");
    int v = parse_digits();
    if (braced) expect("}");
    if (v == 0) fail("exponent 0 is not allowed");
    return sign * v;
  }

  int parse_digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stoi(std::string(s_.substr(start, pos_ - start)));
  }

  // (digits | name) (('+'|'-') digits)?
  int parse_expr() {
    int base = 0;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      base = parse_digits();
    } else if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto it = env_.find(name);
      if (it == env_.end()) {
        pos_ = start;
        fail("unbound index variable '" + std::string(name) + "'");
      }
      base = it->second;
    } else {
      fail("expected index");
    }
    if (accept("+")) return base + parse_digits();
    if (accept("-")) return base - parse_digits();
    return base;
  }

  // digits | name | '{' expr '}'
  int parse_index() {
    if (accept("{")) {
      int v = parse_expr();
      expect("}");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      // A bare index is a single digit, as in t_{a_1}; longer ones need braces
      // but are accepted when unambiguous.
      return parse_digits();
    }
    std::size_t start = pos_;
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      std::string name(1, s_[pos_++]);
      auto it = env_.find(name);
      if (it == env_.end()) {
        pos_ = start;
        fail("unbound index variable '" + name + "'");
      }
      return it->second;
    }
    fail("expected index");
  }

  std::vector<int> parse_alpha() {
    expect("alpha_");
    std::vector<int> set;
    if (accept("{")) {
      set.push_back(parse_expr());
      while (accept(",")) set.push_back(parse_expr());
      expect("}");
    } else {
      set.push_back(parse_index());
    }
    std::sort(set.begin(), set.end());
    return set;
  }

  GeneratorLetter parse_letter() {
    GeneratorLetter letter;
    if (accept("t_{")) {
      if (pos_ >= s_.size()) fail("expected curve name");
      char curve = s_[pos_];
      if (curve == 'b') {
        fail("t_{b_j} is not supported: the homology class of b_j is not "
             "determined here; express it through t_{a_i} and t_{c_i}");
      }
      if (curve != 'a' && curve != 'c' && curve != 'd') {
        fail("unknown twist curve '" + std::string(1, curve) + "' (expected a, c or d)");
      }
      ++pos_;
      expect("_");
      letter.i = parse_index();
      expect("}");
      letter.kind = curve == 'a' ? LetterKind::TwistA
                  : curve == 'c' ? LetterKind::TwistC
                                 : LetterKind::TwistD;
      return letter;
    }
    if (accept("Y_{")) {
      skip_ws();
      if (s_.substr(pos_, 6) == "alpha_") {
        letter.kind = LetterKind::AlphaY;
        letter.leg_set = parse_alpha();
        skip_ws();
        expect(",");
        skip_ws();
        letter.arm_set = parse_alpha();
      } else {
        letter.kind = LetterKind::YHomeo;
        letter.i = parse_expr();
        skip_ws();
        expect(",");
        skip_ws();
        letter.j = parse_expr();
      }
      skip_ws();
      expect("}");
      return letter;
    }
    fail("expected a generator letter (t_{a_i}, t_{c_i}, t_{d_i}, Y_{i,j})");
  }

  Genus g_;
  std::string_view s_;
  const VariableEnv& env_;
  std::size_t pos_ = 0;
};

}  // namespace

GeneratorLetter GeneratorLetter::inverted() const {
  GeneratorLetter out = *this;
  out.exponent = -exponent;
  return out;
}

std::string GeneratorLetter::to_string() const {
  std::string body;
  switch (kind) {
    case LetterKind::TwistA: body = "t_{a_" + render_index(i) + "}"; break;
    case LetterKind::TwistC: body = "t_{c_" + render_index(i) + "}"; break;
    case LetterKind::TwistD: body = "t_{d_" + render_index(i) + "}"; break;
    case LetterKind::YHomeo:
      body = "Y_{" + std::to_string(i) + "," + std::to_string(j) + "}";
      break;
    case LetterKind::AlphaY:
      body = "Y_{" + render_set(leg_set) + "," + render_set(arm_set) + "}";
      break;
  }
  return body + render_power(exponent);
}

void validate_letter(const GeneratorLetter& letter, Genus genus) {
  const int g = genus.value();
  auto bad = [&](const std::string& why) {
    throw InvalidArgument(letter.to_string() + ": " + why + " (genus " +
                          std::to_string(g) + ")");
  };
  if (letter.exponent == 0) bad("exponent must be nonzero");
  switch (letter.kind) {
    case LetterKind::TwistA:
      if (letter.i < 1 || letter.i > g - 1) bad("a_i needs 1 <= i <= g-1");
      break;
    case LetterKind::TwistC:
      if (letter.i < 1 || letter.i > g - 3) bad("c_i needs 1 <= i <= g-3");
      break;
    case LetterKind::TwistD:
      if (letter.i < 1 || letter.i > g - 2) bad("d_i needs 1 <= i <= g-2");
      break;
    case LetterKind::YHomeo:
      if (letter.i < 1 || letter.i > g || letter.j < 1 || letter.j > g) {
        bad("Y_{i,j} indices must lie in 1..g");
      }
      if (letter.i == letter.j) bad("Y_{i,j} needs i != j");
      break;
    case LetterKind::AlphaY: {
      const auto& leg = letter.leg_set;
      const auto& arm = letter.arm_set;
      auto in_range = [g](const std::vector<int>& s) {
        return std::all_of(s.begin(), s.end(), [g](int v) { return v >= 1 && v <= g; }) &&
               std::adjacent_find(s.begin(), s.end()) == s.end();
      };
      if (leg.empty() || !in_range(leg) || !in_range(arm)) {
        bad("alpha sets must be nonempty sets of indices in 1..g");
      }
      if (arm.size() != leg.size() + 1 ||
          !std::includes(arm.begin(), arm.end(), leg.begin(), leg.end())) {
        bad("arm set must be the leg set plus one index");
      }
      if (leg.size() % 2 == 0) bad("the leg alpha_I must be one-sided (|I| odd)");
      break;
    }
  }
}

GeneratorLetter twist_a(int i, int exponent) {
  return {.kind = LetterKind::TwistA, .i = i, .exponent = exponent};
}
GeneratorLetter twist_c(int i, int exponent) {
  return {.kind = LetterKind::TwistC, .i = i, .exponent = exponent};
}
GeneratorLetter twist_d(int i, int exponent) {
  return {.kind = LetterKind::TwistD, .i = i, .exponent = exponent};
}
GeneratorLetter y_homeo(int leg, int arm, int exponent) {
  return {.kind = LetterKind::YHomeo, .i = leg, .j = arm, .exponent = exponent};
}
GeneratorLetter alpha_y(std::vector<int> leg_set, std::vector<int> arm_set, int exponent) {
  std::sort(leg_set.begin(), leg_set.end());
  std::sort(arm_set.begin(), arm_set.end());
  return {.kind = LetterKind::AlphaY,
          .leg_set = std::move(leg_set),
          .arm_set = std::move(arm_set),
          .exponent = exponent};
}

MCGWord::MCGWord(Genus g, std::vector<GeneratorLetter> letters)
    : genus_(g), letters_(std::move(letters)) {
  for (const auto& l : letters_) validate_letter(l, genus_);
}

MCGWord MCGWord::parse(Genus g, std::string_view text, const VariableEnv& env) {
  WordParser parser(g, text, env);
  return MCGWord(g, parser.parse());
}

MCGWord MCGWord::inverse() const {
  std::vector<GeneratorLetter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverted());
  return MCGWord(genus_, std::move(out));
}

MCGWord MCGWord::operator*(const MCGWord& other) const {
  require_same_genus(genus_, other.genus_);
  std::vector<GeneratorLetter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return MCGWord(genus_, std::move(out));
}

std::string MCGWord::to_string() const {
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    out += l.to_string();
  }
  return out;
}

std::optional<H1Vector> curve_class(const GeneratorLetter& letter, Genus g) {
  validate_letter(letter, g);
  switch (letter.kind) {
    case LetterKind::TwistA: return H1Vector::from_indices(g, {letter.i, letter.i + 1});
    case LetterKind::TwistC:
      return H1Vector::from_indices(g, {letter.i, letter.i + 1, letter.i + 2, letter.i + 3});
    case LetterKind::TwistD: return H1Vector::from_indices(g, {letter.i, letter.i + 2});
    default: return std::nullopt;
  }
}

std::optional<H1Vector> leg_class(const GeneratorLetter& letter, Genus g) {
  validate_letter(letter, g);
  switch (letter.kind) {
    case LetterKind::YHomeo: return H1Vector::basis(g, letter.i);
    case LetterKind::AlphaY: return H1Vector::from_indices(g, letter.leg_set);
    default: return std::nullopt;
  }
}

std::optional<H1Vector> arm_class(const GeneratorLetter& letter, Genus g) {
  validate_letter(letter, g);
  switch (letter.kind) {
    case LetterKind::YHomeo: return H1Vector::from_indices(g, {letter.i, letter.j});
    case LetterKind::AlphaY: return H1Vector::from_indices(g, letter.arm_set);
    default: return std::nullopt;
  }
}

H1Matrix letter_matrix(const GeneratorLetter& letter, Genus g) {
  auto axis = curve_class(letter, g);
  // Y-homeomorphisms act trivially on H1; a twist acts as an involution, so
  // only the parity of the exponent matters.
  if (!axis || letter.exponent % 2 == 0) return H1Matrix::identity(g);
  return transvection(*axis);
}

H1Matrix induced_matrix(const MCGWord& w) {
  H1Matrix m = H1Matrix::identity(w.genus());
  for (const auto& l : w.letters()) m = m.compose(letter_matrix(l, w.genus()));
  return m;
}

ExtendabilityVerdict decide_extendable(const MCGWord& w) {
  H1Matrix m = induced_matrix(w);
  PreservationVerdict p = preserves_q(m);
  return ExtendabilityVerdict{
      .extendable = p.preserves, .matrix = m, .mode = p.mode, .witness = p.witness};
}

bool is_homologically_trivial(const MCGWord& w) { return induced_matrix(w).is_identity(); }

}  // namespace gmq
