#include "gmq/f2core.hpp"

#include <bit>
#include <cctype>
#include <sstream>

namespace gmq {

namespace {

constexpr std::uint64_t kOddPositions = 0x5555555555555555ULL;  // x1, x3, ...

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

GenusMismatch::GenusMismatch(int lhs, int rhs)
    : Error("genus mismatch: " + std::to_string(lhs) + " vs " +
            std::to_string(rhs)) {}

ParseError::ParseError(std::string message, std::size_t position)
    : Error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

Genus::Genus(int g) : g_(g) {
  if (g < 1 || g > kMaxGenus) {
    throw InvalidArgument("genus must lie in [1, 64], got " + std::to_string(g));
  }
}

void require_same_genus(Genus a, Genus b) {
  if (a != b) throw GenusMismatch(a.value(), b.value());
}

H1Vector H1Vector::basis(Genus g, int index) {
  if (index < 1 || index > g.value()) {
    throw InvalidArgument("basis index x" + std::to_string(index) +
                          " out of range for genus " + std::to_string(g.value()));
  }
  return H1Vector(g, std::uint64_t{1} << (index - 1));
}

H1Vector H1Vector::from_bits(Genus g, std::uint64_t bits) {
  if ((bits & ~g.mask()) != 0) {
    throw InvalidArgument("bit mask has coefficients beyond genus " +
                          std::to_string(g.value()));
  }
  return H1Vector(g, bits);
}

H1Vector H1Vector::from_indices(Genus g, const std::vector<int>& indices) {
  H1Vector v = zero(g);
  for (int i : indices) v += basis(g, i);
  return v;
}

H1Vector H1Vector::parse(Genus g, std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty vector", 0);
  if (s == "0") return zero(g);

  if (s.find_first_not_of("01") == std::string::npos) {
    if (static_cast<int>(s.size()) != g.value()) {
      throw ParseError("bit string length " + std::to_string(s.size()) +
                           " does not match genus " + std::to_string(g.value()),
                       0);
    }
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') bits |= std::uint64_t{1} << i;
    }
    return H1Vector(g, bits);
  }

  // x-notation; repeated terms cancel mod 2.
  H1Vector v = zero(g);
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != 'x') throw ParseError("expected 'x'", pos);
    std::size_t start = ++pos;
    while (pos < s.size() && is_digit(s[pos])) ++pos;
    if (pos == start) throw ParseError("expected basis index", pos);
    int index = std::stoi(s.substr(start, pos - start));
    if (index < 1 || index > g.value()) {
      throw ParseError("basis index x" + std::to_string(index) +
                           " out of range for genus " + std::to_string(g.value()),
                       start);
    }
    v += basis(g, index);
    if (pos < s.size()) {
      if (s[pos] != '+') throw ParseError("expected '+'", pos);
      ++pos;
      if (pos == s.size()) throw ParseError("dangling '+'", pos);
    }
  }
  return v;
}

bool H1Vector::coeff(int index) const {
  if (index < 1 || index > genus_.value()) {
    throw InvalidArgument("coefficient index out of range");
  }
  return ((bits_ >> (index - 1)) & 1U) != 0;
}

std::vector<int> H1Vector::support() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b) + 1);
  }
  return out;
}

int H1Vector::weight() const noexcept { return std::popcount(bits_); }
int H1Vector::odd_weight() const noexcept {
  return std::popcount(bits_ & kOddPositions);
}
int H1Vector::even_weight() const noexcept {
  return std::popcount(bits_ & ~kOddPositions);
}

std::string H1Vector::to_string() const {
  if (bits_ == 0) return "0";
  std::string out;
  for (int i : support()) {
    if (!out.empty()) out += '+';
    out += 'x' + std::to_string(i);
  }
  return out;
}

std::string H1Vector::to_bitstring() const {
  std::string out(static_cast<std::size_t>(genus_.value()), '0');
  for (int i : support()) out[static_cast<std::size_t>(i - 1)] = '1';
  return out;
}

H1Vector H1Vector::operator+(const H1Vector& other) const {
  require_same_genus(genus_, other.genus_);
  return H1Vector(genus_, bits_ ^ other.bits_);
}

H1Vector& H1Vector::operator+=(const H1Vector& other) {
  require_same_genus(genus_, other.genus_);
  bits_ ^= other.bits_;
  return *this;
}

int intersection(const H1Vector& v, const H1Vector& w) {
  require_same_genus(v.genus(), w.genus());
  return std::popcount(v.bits() & w.bits()) & 1;
}

int rank_f2(std::vector<std::uint64_t> columns) {
  int rank = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::uint64_t pivot = columns[i];
    if (pivot == 0) continue;
    ++rank;
    std::uint64_t low = pivot & (~pivot + 1);
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      if (columns[j] & low) columns[j] ^= pivot;
    }
  }
  return rank;
}

H1Matrix H1Matrix::identity(Genus g) {
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(g.value()));
  for (int j = 0; j < g.value(); ++j) cols[j] = std::uint64_t{1} << j;
  return H1Matrix(g, std::move(cols));
}

H1Matrix H1Matrix::from_columns(Genus g, std::vector<std::uint64_t> columns) {
  if (static_cast<int>(columns.size()) != g.value()) {
    throw InvalidArgument("matrix needs exactly g columns");
  }
  for (auto c : columns) {
    if ((c & ~g.mask()) != 0) throw InvalidArgument("column exceeds genus");
  }
  if (rank_f2(columns) != g.value()) {
    throw SingularMatrix("matrix is singular over F2");
  }
  return H1Matrix(g, std::move(columns));
}

H1Vector H1Matrix::column(int index) const {
  if (index < 1 || index > genus_.value()) {
    throw InvalidArgument("column index out of range");
  }
  return H1Vector::from_bits(genus_, cols_[index - 1]);
}

std::uint64_t H1Matrix::apply_bits(std::uint64_t v) const noexcept {
  std::uint64_t out = 0;
  for (; v != 0; v &= v - 1) out ^= cols_[std::countr_zero(v)];
  return out;
}

H1Vector H1Matrix::apply(const H1Vector& v) const {
  require_same_genus(genus_, v.genus());
  return H1Vector::from_bits(genus_, apply_bits(v.bits()));
}

H1Matrix H1Matrix::compose(const H1Matrix& other) const {
  require_same_genus(genus_, other.genus_);
  std::vector<std::uint64_t> cols(other.cols_.size());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = apply_bits(other.cols_[j]);
  return H1Matrix(genus_, std::move(cols));
}

H1Matrix H1Matrix::inverse() const {
  // Gauss-Jordan on the rows of [M | I].
  const int g = genus_.value();
  std::vector<std::uint64_t> rows(g), inv(g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      if ((cols_[j] >> i) & 1U) rows[i] |= std::uint64_t{1} << j;
    }
    inv[i] = std::uint64_t{1} << i;
  }
  for (int c = 0; c < g; ++c) {
    int p = c;
    while (p < g && !((rows[p] >> c) & 1U)) ++p;
    std::swap(rows[c], rows[p]);
    std::swap(inv[c], inv[p]);
    for (int r = 0; r < g; ++r) {
      if (r != c && ((rows[r] >> c) & 1U)) {
        rows[r] ^= rows[c];
        inv[r] ^= inv[c];
      }
    }
  }
  std::vector<std::uint64_t> cols(g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      if ((inv[i] >> j) & 1U) cols[j] |= std::uint64_t{1} << i;
    }
  }
  return H1Matrix(genus_, std::move(cols));
}

bool H1Matrix::is_identity() const noexcept {
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (cols_[j] != (std::uint64_t{1} << j)) return false;
  }
  return true;
}

bool H1Matrix::preserves_intersection() const noexcept {
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    for (std::size_t j = i; j < cols_.size(); ++j) {
      int dot = std::popcount(cols_[i] & cols_[j]) & 1;
      if (dot != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

std::vector<std::string> H1Matrix::to_rows() const {
  const int g = genus_.value();
  std::vector<std::string> rows(g, std::string(g, '0'));
  for (int j = 0; j < g; ++j) {
    for (int i = 0; i < g; ++i) {
      if ((cols_[j] >> i) & 1U) rows[i][j] = '1';
    }
  }
  return rows;
}

std::vector<std::uint64_t> H1Matrix::key() const { return cols_; }

std::size_t MatrixHash::operator()(const H1Matrix& m) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : m.columns()) {
    h ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

H1Matrix transvection(const H1Vector& a) {
  if (a.is_zero()) {
    throw InvalidArgument("transvection axis must be nonzero");
  }
  if (intersection(a, a) != 0) {
    throw InvalidArgument("transvection axis " + a.to_string() +
                          " has odd weight: (a . a)_2 = 1 sends a to 0, so T_a "
                          "would not be invertible");
  }
  const Genus g = a.genus();
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(g.value()));
  for (int j = 0; j < g.value(); ++j) {
    std::uint64_t x = std::uint64_t{1} << j;
    cols[j] = ((a.bits() >> j) & 1U) ? x ^ a.bits() : x;
  }
  return H1Matrix::from_columns(g, std::move(cols));
}

H1Vector apply(const H1Matrix& m, const H1Vector& v) { return m.apply(v); }
H1Matrix compose(const H1Matrix& m, const H1Matrix& n) { return m.compose(n); }

}  // namespace gmq
