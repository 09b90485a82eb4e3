#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "zo/perturb.hpp"

namespace zo {

/// Scalar objective over R^d with an optional exact gradient.
struct Objective {
  std::string name;
  std::size_t dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad_oracle;  // empty when unavailable
  bool pure = true;                   // safe to evaluate concurrently
  std::optional<double> smoothness_L;

  double operator()(const Vector& x) const { return eval(x); }
  bool has_gradient() const noexcept { return static_cast<bool>(grad_oracle); }
  /// Throws InvalidArgument when no oracle exists.
  Vector gradient(const Vector& x) const;
};

}  // namespace zo
