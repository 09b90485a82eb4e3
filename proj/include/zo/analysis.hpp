#pragma once

#include <cstddef>
#include <optional>

#include "zo/objective.hpp"

namespace zo {

/// Coordinates kept by the tau-effective error: |reference_i| > tau, strictly.
struct TauMask {
  double tau = 0.0;
  Eigen::Array<bool, Eigen::Dynamic, 1> mask;

  static TauMask from_reference(const Vector& reference, double tau);
  std::size_t count() const { return static_cast<std::size_t>(mask.count()); }
};

struct VarianceBounds {
  double lower = 0.0;    // d delta^2 ||a||^2
  double upper = 0.0;    // bound on E a^T (v v^T)^2 a given rho
  double min_mse = 0.0;  // (delta^2 d - 2 delta + 1) ||a||^2
};

double variance_lower_bound(const Vector& a, double delta, std::size_t d);
/// delta^2 d ||a||^2 + ||a||^2 rho / 2 + ||a||^2 / 2 sqrt(rho^2 + 4 delta^2 (d - 1) rho).
/// Throws InvalidArgument for negative rho.
double variance_upper_bound(const Vector& a, double delta, std::size_t d, double rho);
double min_variance_mse(double grad_norm_sq, double delta, std::size_t d);
VarianceBounds variance_bounds(const Vector& a, double delta, std::size_t d, double rho);

/// Upper bound on the limiting single-draw MSE: the upper bound above plus
/// (1 - 2 delta) ||a||^2.
double mse_upper_bound(const Vector& a, double delta, std::size_t d, double rho);

double mse(const Vector& est, const Vector& truth);
double tau_mse(const Vector& est, const Vector& truth, double tau);
double tau_mse(const Vector& est, const Vector& truth, const TauMask& mask);

/// Running mean and standard error.
class MeanAccumulator {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MseSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double se = 0.0;
  std::optional<double> tau_mean;
  std::optional<double> tau_se;
};

/// Mean and standard error of the error of n independent single-draw
/// two-point estimates against the oracle gradient. dap_estimated uses the
/// smallest pipeline batch, b = 2.
MseSummary empirical_estimator_mse(const Objective& obj, const Vector& x,
                                   const PerturbationScheme& scheme, double mu, std::size_t n,
                                   std::optional<double> tau, RngStream& rng);

}  // namespace zo
