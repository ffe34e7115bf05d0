// SPDX-License-Identifier: Apache-2.0

#include "dbd/regularizers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dbd/errors.hpp"
#include "dbd/matkit.hpp"

namespace dbd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Radial projection onto {U : inside(U)} = {||U||_F <= radius}.
template <class Inside>
ComplexMatrix scale_into_ball(const ComplexMatrix& v, double radius, Inside inside) {
  if (inside(v)) return v;
  if (radius == 0.0) return ComplexMatrix(v.rows(), v.cols());
  ComplexMatrix u = (radius / frob_norm(v)) * v;
  // Rounding can leave the scaled point one ulp outside; pull it in.
  while (!inside(u)) u *= std::nextafter(1.0, 0.0);
  return u;
}

}  // namespace

bool RegularizerSpec::smooth() const noexcept {
  return std::holds_alternative<reg::Zero>(form) ||
         std::holds_alternative<reg::SquaredFrobenius>(form);
}

bool RegularizerSpec::indicator() const noexcept {
  return std::holds_alternative<reg::FrobeniusBall>(form) ||
         std::holds_alternative<reg::PowerBall>(form);
}

std::string RegularizerSpec::name() const {
  return std::visit(Overloaded{
                        [](const reg::Zero&) { return "zero"; },
                        [](const reg::SquaredFrobenius&) { return "sq_frobenius"; },
                        [](const reg::EntrywiseL1&) { return "l1"; },
                        [](const reg::FrobeniusBall&) { return "frob_ball"; },
                        [](const reg::PowerBall&) { return "power_ball"; },
                    },
                    form);
}

void RegularizerSpec::validate() const {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw ConfigError("regularizer '" + name() + "': weight must be finite and >= 0");
  }
  if (const auto* b = std::get_if<reg::FrobeniusBall>(&form); b && !(b->radius >= 0.0)) {
    throw ConfigError("regularizer 'frob_ball': radius must be >= 0");
  }
  if (const auto* p = std::get_if<reg::PowerBall>(&form); p && !(p->budget >= 0.0)) {
    throw ConfigError("regularizer 'power_ball': budget must be >= 0");
  }
}

double reg_eval(const RegularizerSpec& spec, const ComplexMatrix& v) {
  return std::visit(Overloaded{
                        [](const reg::Zero&) { return 0.0; },
                        [&](const reg::SquaredFrobenius&) { return 0.5 * frob_norm_sq(v); },
                        [&](const reg::EntrywiseL1&) {
                          double s = 0.0;
                          for (const cplx& x : v.data()) s += std::abs(x);
                          return s;
                        },
                        [&](const reg::FrobeniusBall& b) {
                          return frob_norm(v) <= b.radius ? 0.0 : kInf;
                        },
                        [&](const reg::PowerBall& p) {
                          return frob_norm_sq(v) <= p.budget ? 0.0 : kInf;
                        },
                    },
                    spec.form);
}

double reg_weighted(const RegularizerSpec& spec, const ComplexMatrix& v) {
  const double value = reg_eval(spec, v);
  if (spec.indicator()) return value;
  return spec.weight * value;
}

ComplexMatrix reg_grad(const RegularizerSpec& spec, const ComplexMatrix& v) {
  if (std::holds_alternative<reg::Zero>(spec.form)) return ComplexMatrix(v.rows(), v.cols());
  if (std::holds_alternative<reg::SquaredFrobenius>(spec.form)) return v;
  throw NotDifferentiableError("regularizer '" + spec.name() +
                               "' has no gradient; use the proximal z-update mode");
}

ComplexMatrix reg_prox(const RegularizerSpec& spec, const ComplexMatrix& v, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("reg_prox: tau must be >= 0");
  return std::visit(Overloaded{
                        [&](const reg::Zero&) { return v; },
                        [&](const reg::SquaredFrobenius&) { return (1.0 / (1.0 + tau)) * v; },
                        [&](const reg::EntrywiseL1&) {
                          ComplexMatrix u(v.rows(), v.cols());
                          const auto src = v.data();
                          auto dst = u.data();
                          for (std::size_t k = 0; k < src.size(); ++k) {
                            const double mag = std::abs(src[k]);
                            if (mag > tau) dst[k] = src[k] * (1.0 - tau / mag);
                          }
                          return u;
                        },
                        [&](const reg::FrobeniusBall& b) {
                          return scale_into_ball(v, b.radius, [&](const ComplexMatrix& u) {
                            return frob_norm(u) <= b.radius;
                          });
                        },
                        [&](const reg::PowerBall& p) {
                          return scale_into_ball(v, std::sqrt(p.budget), [&](const ComplexMatrix& u) {
                            return frob_norm_sq(u) <= p.budget;
                          });
                        },
                    },
                    spec.form);
}

}  // namespace dbd
