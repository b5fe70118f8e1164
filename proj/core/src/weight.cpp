#include "fcsma/weight.hpp"

#include <cmath>
#include <stdexcept>

namespace fcsma {

double WeightFunction::value(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("weight function argument must be >= 0");
  switch (kind) {
    case WeightKind::Exp: return std::exp(x);
    case WeightKind::LinearPlusOne: return x + 1.0;
    case WeightKind::ExpSqrt: return std::exp(std::sqrt(x));
    case WeightKind::LogPlusE: return std::log(x + M_E);
  }
  throw std::logic_error("unreachable");
}

double WeightFunction::log_value(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("weight function argument must be >= 0");
  switch (kind) {
    case WeightKind::Exp: return x;
    case WeightKind::LinearPlusOne: return std::log1p(x);
    case WeightKind::ExpSqrt: return std::sqrt(x);
    case WeightKind::LogPlusE: return std::log(std::log(x + M_E));
  }
  throw std::logic_error("unreachable");
}

std::string_view WeightFunction::name() const {
  switch (kind) {
    case WeightKind::Exp: return "exp";
    case WeightKind::LinearPlusOne: return "linear-plus-one";
    case WeightKind::ExpSqrt: return "exp-sqrt";
    case WeightKind::LogPlusE: return "log-plus-e";
  }
  throw std::logic_error("unreachable");
}

std::optional<WeightFunction> WeightFunction::from_name(std::string_view name) {
  if (name == "exp") return WeightFunction{WeightKind::Exp};
  if (name == "linear-plus-one") return WeightFunction{WeightKind::LinearPlusOne};
  if (name == "exp-sqrt") return WeightFunction{WeightKind::ExpSqrt};
  if (name == "log-plus-e") return WeightFunction{WeightKind::LogPlusE};
  return std::nullopt;
}

}  // namespace fcsma
