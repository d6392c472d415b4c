#pragma once

// The Z4-valued quadratic form q of the o-standard embedding of N_g in S^4:
// q(x_odd) = +1, q(x_even) = -1, and q(x + y) = q(x) + q(y) + 2 (x . y)_2.

#include <optional>
#include <string>

#include "gmq/f2core.hpp"

namespace gmq {

class Z4Value {
 public:
  constexpr Z4Value() = default;
  constexpr explicit Z4Value(int v) : v_(((v % 4) + 4) % 4) {}

  constexpr int value() const noexcept { return v_; }

  friend constexpr Z4Value operator+(Z4Value a, Z4Value b) {
    return Z4Value(a.v_ + b.v_);
  }
  friend constexpr Z4Value operator-(Z4Value a, Z4Value b) {
    return Z4Value(a.v_ - b.v_);
  }
  friend constexpr bool operator==(Z4Value, Z4Value) = default;

  // "0", "1", "2", "3".
  std::string to_string() const { return std::to_string(v_); }
  // Signed display: 0, +1, 2, -1.
  std::string to_signed_string() const;

 private:
  int v_ = 0;
};

enum class Z4Display { Plain, Signed };

std::string format_z4(Z4Value v, Z4Display mode);

// Closed form: (l_odd(v) - l_even(v)) mod 4.
Z4Value q_eval(const H1Vector& v);

// Peels one support index at a time through the refinement rule. Shares no
// code with q_eval and serves as its oracle.
Z4Value q_eval_recursive(const H1Vector& v);

enum class PreservationMode { Exhaustive, BasisCriterion };

struct PreservationVerdict {
  bool preserves = false;
  PreservationMode mode = PreservationMode::Exhaustive;
  // A class whose q value changes, when preserves is false.
  std::optional<H1Vector> witness;
};

inline constexpr int kExhaustivePreservationMaxGenus = 20;

// Exhaustive over all 2^g classes for g <= 20; above that, checks that the
// intersection form is preserved and q(M x_i) = q(x_i) on the basis, which
// propagates to every class through the refinement rule.
PreservationVerdict preserves_q(const H1Matrix& m);

// Basis criterion only, for any genus.
PreservationVerdict preserves_q_basis(const H1Matrix& m);

const char* to_string(PreservationMode mode);

}  // namespace gmq
