#include "gmq/gmform.hpp"

namespace gmq {

std::string Z4Value::to_signed_string() const {
  switch (v_) {
    case 1: return "+1";
    case 3: return "-1";
    default: return std::to_string(v_);
  }
}

std::string format_z4(Z4Value v, Z4Display mode) {
  return mode == Z4Display::Signed ? v.to_signed_string() : v.to_string();
}

Z4Value q_eval(const H1Vector& v) {
  return Z4Value(v.odd_weight() - v.even_weight());
}

Z4Value q_eval_recursive(const H1Vector& v) {
  const Genus g = v.genus();
  H1Vector rest = H1Vector::zero(g);
  Z4Value acc(0);
  for (int i = 1; i <= g.value(); ++i) {
    if (!v.coeff(i)) continue;
    H1Vector x = H1Vector::basis(g, i);
    Z4Value basis_value(i % 2 == 1 ? 1 : -1);
    acc = acc + basis_value + Z4Value(2 * intersection(rest, x));
    rest += x;
  }
  return acc;
}

PreservationVerdict preserves_q_basis(const H1Matrix& m) {
  PreservationVerdict verdict;
  verdict.mode = PreservationMode::BasisCriterion;
  const Genus g = m.genus();
  for (int i = 1; i <= g.value(); ++i) {
    H1Vector x = H1Vector::basis(g, i);
    if (q_eval(m.apply(x)) != q_eval(x)) {
      verdict.witness = x;
      return verdict;
    }
  }
  // With q preserved on the basis, a broken pairing (x_i . x_j) = 0 shows up
  // as a change of q on x_i + x_j.
  for (int i = 1; i <= g.value(); ++i) {
    for (int j = i + 1; j <= g.value(); ++j) {
      if (intersection(m.column(i), m.column(j)) != 0) {
        verdict.witness = H1Vector::basis(g, i) + H1Vector::basis(g, j);
        return verdict;
      }
    }
  }
  verdict.preserves = true;
  return verdict;
}

PreservationVerdict preserves_q(const H1Matrix& m) {
  const Genus g = m.genus();
  if (g.value() > kExhaustivePreservationMaxGenus) return preserves_q_basis(m);

  PreservationVerdict verdict;
  verdict.mode = PreservationMode::Exhaustive;
  const std::uint64_t count = std::uint64_t{1} << g.value();
  for (std::uint64_t bits = 1; bits < count; ++bits) {
    H1Vector v = H1Vector::from_bits(g, bits);
    if (q_eval(m.apply(v)) != q_eval(v)) {
      verdict.witness = v;
      return verdict;
    }
  }
  verdict.preserves = true;
  return verdict;
}

const char* to_string(PreservationMode mode) {
  return mode == PreservationMode::Exhaustive ? "exhaustive" : "basis";
}

}  // namespace gmq
