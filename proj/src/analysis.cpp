#include "zo/analysis.hpp"

#include <cmath>

#include "zo/errors.hpp"
#include "zo/estimator.hpp"

namespace zo {

TauMask TauMask::from_reference(const Vector& reference, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be non-negative");
  TauMask m;
  m.tau = tau;
  m.mask = reference.array().abs() > tau;
  return m;
}

double variance_lower_bound(const Vector& a, double delta, std::size_t d) {
  return static_cast<double>(d) * delta * delta * a.squaredNorm();
}

double variance_upper_bound(const Vector& a, double delta, std::size_t d, double rho) {
  if (rho < 0.0) throw InvalidArgument("rho must be non-negative");
  const double dd = static_cast<double>(d);
  const double a2 = a.squaredNorm();
  return delta * delta * dd * a2 + 0.5 * a2 * rho +
         0.5 * a2 * std::sqrt(rho * rho + 4.0 * delta * delta * (dd - 1.0) * rho);
}

double min_variance_mse(double grad_norm_sq, double delta, std::size_t d) {
  return (delta * delta * static_cast<double>(d) - 2.0 * delta + 1.0) * grad_norm_sq;
}

VarianceBounds variance_bounds(const Vector& a, double delta, std::size_t d, double rho) {
  return {variance_lower_bound(a, delta, d), variance_upper_bound(a, delta, d, rho),
          min_variance_mse(a.squaredNorm(), delta, d)};
}

double mse_upper_bound(const Vector& a, double delta, std::size_t d, double rho) {
  return variance_upper_bound(a, delta, d, rho) + (1.0 - 2.0 * delta) * a.squaredNorm();
}

double mse(const Vector& est, const Vector& truth) {
  if (est.size() != truth.size()) throw InvalidArgument("mse: dimension mismatch");
  return (est - truth).squaredNorm();
}

double tau_mse(const Vector& est, const Vector& truth, const TauMask& mask) {
  if (est.size() != truth.size() || mask.mask.size() != truth.size())
    throw InvalidArgument("tau_mse: dimension mismatch");
  return ((est - truth).array().square() * mask.mask.cast<double>()).sum();
}

double tau_mse(const Vector& est, const Vector& truth, double tau) {
  if (est.size() != truth.size()) throw InvalidArgument("tau_mse: dimension mismatch");
  return tau_mse(est, truth, TauMask::from_reference(truth, tau));
}

void MeanAccumulator::add(double x) {
  ++n_;
  const double dx = x - mean_;
  mean_ += dx / static_cast<double>(n_);
  m2_ += dx * (x - mean_);
}

double MeanAccumulator::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double MeanAccumulator::standard_error() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

MseSummary empirical_estimator_mse(const Objective& obj, const Vector& x,
                                   const PerturbationScheme& scheme, double mu, std::size_t n,
                                   std::optional<double> tau, RngStream& rng) {
  if (!obj.has_gradient()) throw InvalidArgument("empirical_estimator_mse needs a gradient oracle");
  if (n == 0) throw InvalidArgument("sample count must be positive");
  const Vector truth = obj.gradient(x);
  std::optional<TauMask> mask;
  if (tau) mask = TauMask::from_reference(truth, *tau);
  const bool pipeline =
      scheme.kind == SchemeKind::DAP && scheme.anchor_policy == AnchorPolicy::EstimatedGradient;

  MeanAccumulator full;
  MeanAccumulator masked;
  for (std::size_t k = 0; k < n; ++k) {
    const GradientEstimate g = pipeline ? dap_pipeline(obj, x, 2, mu, scheme.delta, rng)
                                        : batched(obj, x, scheme, 1, mu, rng, nullptr);
    full.add(mse(g.gradient, truth));
    if (mask) masked.add(tau_mse(g.gradient, truth, *mask));
  }
  MseSummary s;
  s.n = n;
  s.mean = full.mean();
  s.se = full.standard_error();
  if (mask) {
    s.tau_mean = masked.mean();
    s.tau_se = masked.standard_error();
  }
  return s;
}

}  // namespace zo
