#pragma once

// Exact linear algebra over F2 on H1(N_g; Z2) with the basis x_1..x_g.
//
// Vectors are bit masks (bit i-1 holds the coefficient of x_i). The mod-2
// intersection form is the identity Gram matrix in this basis: the x_i are
// pairwise disjoint one-sided circles.

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gmq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenusMismatch : public Error {
 public:
  GenusMismatch(int lhs, int rhs);
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline constexpr int kMaxGenus = 64;

class Genus {
 public:
  explicit Genus(int g);

  int value() const noexcept { return g_; }
  // Mask with the low g bits set.
  std::uint64_t mask() const noexcept {
    return g_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g_) - 1);
  }

  friend bool operator==(Genus, Genus) = default;
  friend auto operator<=>(Genus, Genus) = default;

 private:
  int g_;
};

void require_same_genus(Genus a, Genus b);

class H1Vector {
 public:
  static H1Vector zero(Genus g) { return H1Vector(g, 0); }
  // 1-based basis index.
  static H1Vector basis(Genus g, int index);
  static H1Vector from_bits(Genus g, std::uint64_t bits);
  static H1Vector from_indices(Genus g, const std::vector<int>& indices);
  // All-ones vector x_1 + ... + x_g.
  static H1Vector all_ones(Genus g) { return H1Vector(g, g.mask()); }

  // Accepts "x1+x3+x4", "0", or a bit string of length g ("1011", index 1
  // leftmost).
  static H1Vector parse(Genus g, std::string_view text);

  Genus genus() const noexcept { return genus_; }
  std::uint64_t bits() const noexcept { return bits_; }
  bool is_zero() const noexcept { return bits_ == 0; }

  bool coeff(int index) const;
  std::vector<int> support() const;
  int weight() const noexcept;
  // Number of odd (resp. even) basis indices in the support.
  int odd_weight() const noexcept;
  int even_weight() const noexcept;

  std::string to_string() const;     // "x1+x3", "0" for the zero class
  std::string to_bitstring() const;  // "1010..."

  H1Vector operator+(const H1Vector& other) const;
  H1Vector& operator+=(const H1Vector& other);

  friend bool operator==(const H1Vector&, const H1Vector&) = default;

 private:
  H1Vector(Genus g, std::uint64_t bits) : genus_(g), bits_(bits) {}

  Genus genus_;
  std::uint64_t bits_;
};

// Mod-2 intersection number (x . y)_2.
int intersection(const H1Vector& v, const H1Vector& w);

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class H1Matrix {
 public:
  static H1Matrix identity(Genus g);
  // columns[j] is the image of x_{j+1}, as a bit mask. Rejects singular input.
  static H1Matrix from_columns(Genus g, std::vector<std::uint64_t> columns);

  Genus genus() const noexcept { return genus_; }
  const std::vector<std::uint64_t>& columns() const noexcept { return cols_; }
  H1Vector column(int index) const;  // 1-based

  H1Vector apply(const H1Vector& v) const;
  std::uint64_t apply_bits(std::uint64_t v) const noexcept;
  // this o other (other acts first).
  H1Matrix compose(const H1Matrix& other) const;
  H1Matrix inverse() const;

  bool is_identity() const noexcept;
  // M^T M = I, i.e. the identity Gram matrix is preserved.
  bool preserves_intersection() const noexcept;

  // Rows as bit strings, top row first.
  std::vector<std::string> to_rows() const;
  // Compact column encoding used for hashing and lexicographic ordering.
  std::vector<std::uint64_t> key() const;

  friend bool operator==(const H1Matrix&, const H1Matrix&) = default;
  friend auto operator<=>(const H1Matrix& a, const H1Matrix& b) {
    return a.cols_ <=> b.cols_;
  }

 private:
  H1Matrix(Genus g, std::vector<std::uint64_t> cols)
      : genus_(g), cols_(std::move(cols)) {}

  Genus genus_;
  std::vector<std::uint64_t> cols_;
};

// T_a(x) = x + (x . a)_2 a. Requires a != 0 with even weight.
H1Matrix transvection(const H1Vector& a);

H1Vector apply(const H1Matrix& m, const H1Vector& v);
H1Matrix compose(const H1Matrix& m, const H1Matrix& n);

int rank_f2(std::vector<std::uint64_t> columns);

struct MatrixHash {
  std::size_t operator()(const H1Matrix& m) const noexcept;
};

}  // namespace gmq
