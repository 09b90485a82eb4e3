#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "zo/objective.hpp"

namespace zo {

struct GradientEstimate {
  Vector gradient;
  double mu = 0.0;
  std::size_t batch = 0;
  std::size_t evals = 0;  // objective evaluations spent
  std::string scheme_name;
  std::uint64_t seed = 0;
};

/// (f(x + mu v) - f(x)) / mu * v. Throws EvaluationError on a non-finite value.
Vector two_point(const Objective& obj, const Vector& x, const Vector& v, double mu);

/// (1 / (mu b)) * sum_i (f(x + mu v_i) - f(x)) v_i over the given directions,
/// with f(x) supplied by the caller. Terms are accumulated in index order.
Vector batched_from_directions(const Objective& obj, const Vector& x, double fx,
                               std::span<const Vector> directions, double mu);

/// Batched two-point estimate with b fresh draws from `scheme` (b + 1 evaluations).
///
/// DAP draws are anchored at `anchor` when given, otherwise at the gradient
/// oracle for the ExactGradient policy. EstimatedGradient without an anchor is
/// rejected: use dap_pipeline.
GradientEstimate batched(const Objective& obj, const Vector& x, const PerturbationScheme& scheme,
                         std::size_t b, double mu, RngStream& rng, const Vector* anchor = nullptr);

/// Two-stage DAP estimator: b/2 uniform-sphere draws give a pilot estimate,
/// b/2 DAP draws anchored at the pilot give a second one, and the result is
/// their average (b + 2 evaluations). b must be even and positive.
GradientEstimate dap_pipeline(const Objective& obj, const Vector& x, std::size_t b, double mu,
                              double delta, RngStream& rng);

/// Dispatch used by the optimizer and the harness: DAP with the
/// EstimatedGradient policy goes through dap_pipeline, everything else
/// through batched.
GradientEstimate estimate(const Objective& obj, const Vector& x, const PerturbationScheme& scheme,
                          std::size_t b, double mu, RngStream& rng);

}  // namespace zo
