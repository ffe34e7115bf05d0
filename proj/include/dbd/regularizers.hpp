// SPDX-License-Identifier: Apache-2.0
//
// Regularizer catalog for the channel and signal terms. Evaluation excludes
// the weight; the solver applies it. Indicator variants (FrobeniusBall,
// PowerBall) evaluate to +infinity outside their set, and scaling an
// indicator by any weight leaves it unchanged, so their proximal maps are
// plain projections that ignore tau.

#pragma once

#include <string>
#include <variant>

#include "dbd/matrix.hpp"

namespace dbd {

namespace reg {
struct Zero {
  friend bool operator==(const Zero&, const Zero&) = default;
};
/// (1/2) ||V||_F^2
struct SquaredFrobenius {
  friend bool operator==(const SquaredFrobenius&, const SquaredFrobenius&) = default;
};
/// sum_ij |v_ij|
struct EntrywiseL1 {
  friend bool operator==(const EntrywiseL1&, const EntrywiseL1&) = default;
};
/// indicator of ||V||_F <= radius
struct FrobeniusBall {
  double radius = 0.0;
  friend bool operator==(const FrobeniusBall&, const FrobeniusBall&) = default;
};
/// indicator of ||V||_F^2 <= budget
struct PowerBall {
  double budget = 0.0;
  friend bool operator==(const PowerBall&, const PowerBall&) = default;
};
}  // namespace reg

struct RegularizerSpec {
  using Form = std::variant<reg::Zero, reg::SquaredFrobenius, reg::EntrywiseL1,
                            reg::FrobeniusBall, reg::PowerBall>;

  Form form = reg::Zero{};
  double weight = 0.0;

  static RegularizerSpec zero() { return {}; }
  static RegularizerSpec squared_frobenius(double weight) { return {reg::SquaredFrobenius{}, weight}; }
  static RegularizerSpec l1(double weight) { return {reg::EntrywiseL1{}, weight}; }
  static RegularizerSpec frobenius_ball(double radius, double weight = 1.0) {
    return {reg::FrobeniusBall{radius}, weight};
  }
  static RegularizerSpec power_ball(double budget, double weight = 1.0) {
    return {reg::PowerBall{budget}, weight};
  }

  /// Gradient defined everywhere (Zero, SquaredFrobenius).
  bool smooth() const noexcept;
  bool indicator() const noexcept;
  /// Config name: "zero", "sq_frobenius", "l1", "frob_ball", "power_ball".
  std::string name() const;
  /// Throws ConfigError on negative weight, radius or budget.
  void validate() const;

  friend bool operator==(const RegularizerSpec&, const RegularizerSpec&) = default;
};

/// Unweighted value; +infinity for an infeasible indicator.
double reg_eval(const RegularizerSpec& spec, const ComplexMatrix& v);

/// weight * reg_eval, with indicators kept at 0 / +infinity for every weight.
double reg_weighted(const RegularizerSpec& spec, const ComplexMatrix& v);

/// Gradient of the unweighted regularizer. Throws NotDifferentiableError for
/// prox-only variants.
ComplexMatrix reg_grad(const RegularizerSpec& spec, const ComplexMatrix& v);

/// argmin_U tau * reg(U) + (1/2) ||U - V||_F^2. tau = 0 yields V for the
/// non-indicator variants; negative tau throws std::invalid_argument.
ComplexMatrix reg_prox(const RegularizerSpec& spec, const ComplexMatrix& v, double tau);

}  // namespace dbd
