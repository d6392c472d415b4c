#include <doctest.h>

#include "gmq/f2core.hpp"
#include "gmq/gmform.hpp"
#include "oracle.hpp"

using namespace gmq;

TEST_SUITE("f2core") {
  TEST_CASE("genus bounds") {
    CHECK_THROWS_AS(Genus(0), InvalidArgument);
    CHECK_THROWS_AS(Genus(65), InvalidArgument);
    CHECK(Genus(64).mask() == ~std::uint64_t{0});
    CHECK(Genus(3).mask() == 0b111);
  }

  TEST_CASE("vector parsing and printing") {
    Genus g(5);
    H1Vector v = H1Vector::parse(g, "x1+x3");
    CHECK(v.bits() == 0b00101);
    CHECK(v.to_string() == "x1+x3");
    CHECK(v.to_bitstring() == "10100");
    CHECK(H1Vector::parse(g, "10100") == v);
    CHECK(H1Vector::parse(g, " x3 + x1 ") == v);
    CHECK(H1Vector::parse(g, "0").is_zero());
    CHECK(H1Vector::zero(g).to_string() == "0");
    CHECK_THROWS_AS(H1Vector::parse(g, "x6"), Error);
    CHECK_THROWS_AS(H1Vector::parse(g, "x1+"), ParseError);
    CHECK_THROWS_AS(H1Vector::parse(g, "101"), ParseError);
    CHECK_THROWS_AS(H1Vector::from_bits(g, 0b100000), InvalidArgument);
  }

  TEST_CASE("parse error reports a position") {
    try {
      H1Vector::parse(Genus(4), "x1+y2");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 3);
    }
  }

  TEST_CASE("weights split by index parity") {
    H1Vector v = H1Vector::from_indices(Genus(7), {2, 3, 6, 7});
    CHECK(v.weight() == 4);
    CHECK(v.odd_weight() == 2);
    CHECK(v.even_weight() == 2);
    CHECK(v.support() == std::vector<int>{2, 3, 6, 7});
  }

  TEST_CASE("intersection examples") {
    Genus g(3);
    auto x1 = H1Vector::basis(g, 1), x2 = H1Vector::basis(g, 2);
    CHECK(intersection(x1, x1) == 1);
    CHECK(intersection(x1, x2) == 0);
    CHECK(intersection(x1 + x2, x2) == 1);
    CHECK_THROWS_AS(intersection(x1, H1Vector::basis(Genus(4), 1)), GenusMismatch);
  }

  TEST_CASE("intersection matches the polarization of q") {
    // (q(v+w) - q(v) - q(w)) / 2 mod 2, computed by the oracle.
    Genus g(6);
    for (std::uint64_t v = 0; v < 64; ++v)
      for (std::uint64_t w = 0; w < 64; ++w) {
        int pol = ((oracle::q(v ^ w) - oracle::q(v) - oracle::q(w)) % 4 + 4) % 4 / 2;
        REQUIRE(intersection(H1Vector::from_bits(g, v), H1Vector::from_bits(g, w)) == pol);
      }
  }

  TEST_CASE("transvection examples and errors") {
    Genus g(4);
    auto t13 = transvection(H1Vector::parse(g, "x1+x3"));
    CHECK(t13.apply(H1Vector::parse(g, "x2")) == H1Vector::parse(g, "x2"));
    CHECK(t13.apply(H1Vector::parse(g, "x1")) == H1Vector::parse(g, "x3"));
    CHECK(transvection(H1Vector::parse(g, "x1+x2")).apply(H1Vector::parse(g, "x1")) ==
          H1Vector::parse(g, "x2"));
    CHECK(t13.compose(t13).is_identity());
    CHECK_THROWS_AS(transvection(H1Vector::parse(g, "x1")), InvalidArgument);
    CHECK_THROWS_AS(transvection(H1Vector::zero(g)), InvalidArgument);
  }

  TEST_CASE("transvection agrees with the formula on every vector") {
    for (int n = 2; n <= 7; ++n) {
      Genus g(n);
      for (std::uint64_t a = 1; a <= g.mask(); ++a) {
        if (std::popcount(a) % 2) continue;
        H1Matrix t = transvection(H1Vector::from_bits(g, a));
        for (std::uint64_t x = 0; x <= g.mask(); ++x)
          REQUIRE(t.apply_bits(x) == oracle::transvect(a, x));
      }
    }
  }

  TEST_CASE("compose puts the right factor first") {
    Genus g(4);
    auto a = transvection(H1Vector::parse(g, "x1+x2"));
    auto b = transvection(H1Vector::parse(g, "x2+x3"));
    H1Vector x = H1Vector::parse(g, "x1");
    CHECK(a.compose(b).apply(x) == a.apply(b.apply(x)));
    CHECK(compose(a, H1Matrix::identity(g)) == a);
    CHECK(apply(H1Matrix::identity(g), x) == x);
  }

  TEST_CASE("from_columns rejects singular input") {
    Genus g(3);
    CHECK_THROWS_AS(H1Matrix::from_columns(g, {0b001, 0b001, 0b100}), SingularMatrix);
    CHECK_THROWS_AS(H1Matrix::from_columns(g, {0b001, 0b010}), InvalidArgument);
  }

  TEST_CASE("inverse and rank on random invertible products") {
    auto rng = oracle::rng(17);
    for (int n = 2; n <= 12; ++n) {
      Genus g(n);
      for (int trial = 0; trial < 40; ++trial) {
        H1Matrix m = H1Matrix::identity(g);
        for (int k = 0; k < 10; ++k) {
          std::uint64_t a = rng() & g.mask();
          if (a == 0 || std::popcount(a) % 2) continue;
          m = m.compose(transvection(H1Vector::from_bits(g, a)));
        }
        CHECK(m.compose(m.inverse()).is_identity());
        CHECK(m.inverse().compose(m).is_identity());
        CHECK(rank_f2(m.columns()) == n);
        CHECK(m.preserves_intersection());
      }
    }
  }

  TEST_CASE("rows and keys") {
    Genus g(3);
    auto t = transvection(H1Vector::parse(g, "x1+x3"));
    CHECK(t.to_rows() == std::vector<std::string>{"001", "010", "100"});
    CHECK(t.key() == t.columns());
    CHECK(MatrixHash{}(t) == MatrixHash{}(transvection(H1Vector::parse(g, "x1+x3"))));
  }
}
