#include "zo/estimator.hpp"

#include <cmath>
#include <vector>

#include "zo/errors.hpp"

namespace zo {

namespace {

double checked_eval(const Objective& obj, const Vector& x) {
  const double f = obj(x);
  if (!std::isfinite(f)) throw EvaluationError("objective returned a non-finite value", x);
  return f;
}

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be finite and positive");
}

void check_point(const Objective& obj, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != obj.dim)
    throw InvalidArgument("query point dimension does not match the objective");
}

}  // namespace

Vector two_point(const Objective& obj, const Vector& x, const Vector& v, double mu) {
  check_mu(mu);
  if (v.size() != x.size()) throw InvalidArgument("two_point: perturbation size mismatch");
  const double fx = checked_eval(obj, x);
  const double fp = checked_eval(obj, x + mu * v);
  return ((fp - fx) / mu) * v;
}

Vector batched_from_directions(const Objective& obj, const Vector& x, double fx,
                               std::span<const Vector> directions, double mu) {
  check_mu(mu);
  if (directions.empty()) throw InvalidArgument("batch size must be at least 1");
  Vector acc = Vector::Zero(x.size());
  Vector probe(x.size());
  for (const Vector& v : directions) {
    if (v.size() != x.size()) throw InvalidArgument("perturbation size mismatch");
    probe = x + mu * v;
    acc += (checked_eval(obj, probe) - fx) * v;
  }
  return acc / (mu * static_cast<double>(directions.size()));
}

GradientEstimate batched(const Objective& obj, const Vector& x, const PerturbationScheme& scheme,
                         std::size_t b, double mu, RngStream& rng, const Vector* anchor) {
  if (b == 0) throw InvalidArgument("batch size must be at least 1");
  check_mu(mu);
  check_point(obj, x);
  scheme.validate();

  Vector oracle_anchor;
  if (scheme.kind == SchemeKind::DAP && anchor == nullptr) {
    if (scheme.anchor_policy == AnchorPolicy::EstimatedGradient)
      throw InvalidArgument("dap_estimated needs an anchor; use dap_pipeline");
    oracle_anchor = obj.gradient(x);
    anchor = &oracle_anchor;
  }

  const std::uint64_t seed = rng.seed();
  std::vector<Vector> dirs;
  dirs.reserve(b);
  for (std::size_t i = 0; i < b; ++i) dirs.push_back(sample(scheme, obj.dim, rng, anchor));

  const double fx = checked_eval(obj, x);
  GradientEstimate out;
  out.gradient = batched_from_directions(obj, x, fx, dirs, mu);
  out.mu = mu;
  out.batch = b;
  out.evals = b + 1;
  out.scheme_name = scheme.name();
  out.seed = seed;
  return out;
}

GradientEstimate dap_pipeline(const Objective& obj, const Vector& x, std::size_t b, double mu,
                              double delta, RngStream& rng) {
  if (b == 0 || b % 2 != 0) throw InvalidArgument("dap_pipeline: batch size must be even and positive");
  const std::size_t half = b / 2;
  const std::uint64_t seed = rng.seed();

  PerturbationScheme pilot_scheme{SchemeKind::UniformSphere, delta, AnchorPolicy::ExactGradient};
  const GradientEstimate pilot = batched(obj, x, pilot_scheme, half, mu, rng);

  PerturbationScheme dap_scheme{SchemeKind::DAP, delta, AnchorPolicy::EstimatedGradient};
  const GradientEstimate aligned = batched(obj, x, dap_scheme, half, mu, rng, &pilot.gradient);

  GradientEstimate out;
  out.gradient = 0.5 * (pilot.gradient + aligned.gradient);
  out.mu = mu;
  out.batch = b;
  out.evals = pilot.evals + aligned.evals;
  out.scheme_name = dap_scheme.name();
  out.seed = seed;
  return out;
}

GradientEstimate estimate(const Objective& obj, const Vector& x, const PerturbationScheme& scheme,
                          std::size_t b, double mu, RngStream& rng) {
  if (scheme.kind == SchemeKind::DAP && scheme.anchor_policy == AnchorPolicy::EstimatedGradient)
    return dap_pipeline(obj, x, b, mu, scheme.delta, rng);
  return batched(obj, x, scheme, b, mu, rng);
}

}  // namespace zo
