#ifndef FCSMA_WEIGHT_HPP
#define FCSMA_WEIGHT_HPP

#include <optional>
#include <string_view>

namespace fcsma {

// Admissible aggressiveness functions. Every kind is nondecreasing on
// [0, inf) with f(0) >= 1, and its logarithm grows slowly enough that a
// bounded shift of the argument washes out in the limit:
//   log f(x + a) / log f(x) -> 1 as x -> inf, for any fixed a.
enum class WeightKind {
  Exp,           // f(x) = e^x
  LinearPlusOne, // f(x) = x + 1
  ExpSqrt,       // f(x) = e^sqrt(x)
  LogPlusE,      // f(x) = log(x + e)
};

struct WeightFunction {
  WeightKind kind = WeightKind::Exp;

  double value(double x) const;      // f(x)
  double log_value(double x) const;  // log f(x), evaluated without overflow

  std::string_view name() const;
  static std::optional<WeightFunction> from_name(std::string_view name);
};

}  // namespace fcsma

#endif
