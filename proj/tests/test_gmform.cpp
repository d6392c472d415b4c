#include <doctest.h>

#include "gmq/gmform.hpp"
#include "oracle.hpp"

using namespace gmq;

TEST_SUITE("gmform") {
  TEST_CASE("basis values and small classes") {
    Genus g(4);
    CHECK(q_eval(H1Vector::parse(g, "x1")) == Z4Value(1));
    CHECK(q_eval(H1Vector::parse(g, "x2")) == Z4Value(3));
    CHECK(q_eval(H1Vector::zero(g)) == Z4Value(0));
    CHECK(q_eval(H1Vector::parse(g, "x1+x3")) == Z4Value(2));
    CHECK(q_eval_recursive(H1Vector::parse(g, "x1+x2")) == Z4Value(0));
    CHECK(q_eval_recursive(H1Vector::parse(g, "x2")) == Z4Value(3));
    CHECK(q_eval_recursive(H1Vector::parse(g, "x1+x2+x3+x4")) == Z4Value(0));
  }

  TEST_CASE("Z4 arithmetic and display") {
    CHECK(Z4Value(-1) == Z4Value(3));
    CHECK(Z4Value(3) + Z4Value(2) == Z4Value(1));
    CHECK(Z4Value(1) - Z4Value(2) == Z4Value(3));
    CHECK(Z4Value(3).to_signed_string() == "-1");
    CHECK(Z4Value(1).to_signed_string() == "+1");
    CHECK(format_z4(Z4Value(2), Z4Display::Plain) == "2");
  }

  TEST_CASE("q matches the oracle and its recursive form on every class, g <= 12") {
    for (int n = 1; n <= 12; ++n) {
      Genus g(n);
      for (std::uint64_t v = 0; v <= g.mask(); ++v) {
        H1Vector h = H1Vector::from_bits(g, v);
        REQUIRE(q_eval(h).value() == oracle::q(v));
        REQUIRE(q_eval_recursive(h) == q_eval(h));
      }
    }
  }

  TEST_CASE("refinement rule on random pairs at large genus") {
    auto rng = oracle::rng(5);
    Genus g(64);
    for (int t = 0; t < 20000; ++t) {
      H1Vector x = H1Vector::from_bits(g, rng()), y = H1Vector::from_bits(g, rng());
      REQUIRE(q_eval(x + y) == q_eval(x) + q_eval(y) + Z4Value(2 * intersection(x, y)));
    }
  }

  TEST_CASE("preservation examples") {
    Genus g(4);
    CHECK(preserves_q(H1Matrix::identity(g)).preserves);
    CHECK(preserves_q(transvection(H1Vector::parse(g, "x1+x3"))).preserves);
    auto v = preserves_q(transvection(H1Vector::parse(g, "x1+x2")));
    CHECK_FALSE(v.preserves);
    REQUIRE(v.witness);
    CHECK(*v.witness == H1Vector::parse(g, "x1"));
    CHECK(v.mode == PreservationMode::Exhaustive);
  }

  TEST_CASE("basis criterion agrees with the exhaustive check") {
    auto rng = oracle::rng(11);
    for (int n = 2; n <= 9; ++n) {
      Genus g(n);
      for (int trial = 0; trial < 60; ++trial) {
        H1Matrix m = H1Matrix::identity(g);
        int steps = static_cast<int>(rng() % 6);
        for (int k = 0; k < steps; ++k) {
          std::uint64_t a = rng() & g.mask();
          if (a == 0 || std::popcount(a) % 2) continue;
          m = m.compose(transvection(H1Vector::from_bits(g, a)));
        }
        bool truth = oracle::preserves_q(m.columns());
        REQUIRE(preserves_q(m).preserves == truth);
        REQUIRE(preserves_q_basis(m).preserves == truth);
        auto v = preserves_q(m);
        if (!truth) {
          REQUIRE(v.witness);
          CHECK(q_eval(m.apply(*v.witness)) != q_eval(*v.witness));
        }
      }
    }
  }

  TEST_CASE("large genus uses the basis criterion") {
    Genus g(30);
    auto v = preserves_q(transvection(H1Vector::from_indices(g, {1, 3})));
    CHECK(v.preserves);
    CHECK(v.mode == PreservationMode::BasisCriterion);
    auto w = preserves_q(transvection(H1Vector::from_indices(g, {1, 2})));
    CHECK_FALSE(w.preserves);
    REQUIRE(w.witness);
    CHECK(q_eval(transvection(H1Vector::from_indices(g, {1, 2})).apply(*w.witness)) !=
          q_eval(*w.witness));
  }

  TEST_CASE("transvection criterion, exhaustive for g <= 8") {
    for (int n = 2; n <= 8; ++n) {
      Genus g(n);
      for (std::uint64_t a = 1; a <= g.mask(); ++a) {
        if (std::popcount(a) % 2) continue;
        H1Vector av = H1Vector::from_bits(g, a);
        REQUIRE(preserves_q(transvection(av)).preserves == (oracle::q(a) == 2));
      }
    }
  }
}
