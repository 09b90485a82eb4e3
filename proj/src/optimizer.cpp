#include "zo/optimizer.hpp"

#include <cmath>
#include <string>

#include "zo/errors.hpp"
#include "zo/estimator.hpp"

namespace zo {

namespace {
constexpr double kDivergenceNorm = 1e12;
}

void SgdConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be finite and non-negative");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be finite and positive");
  if (steps == 0) throw InvalidArgument("steps must be at least 1");
  if (batch == 0) throw InvalidArgument("batch must be at least 1");
  if (record_every == 0) throw InvalidArgument("record_every must be at least 1");
  scheme.validate();
}

SgdTrace zo_sgd(const Objective& obj, const Vector& x1, const SgdConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(x1.size()) != obj.dim)
    throw InvalidArgument("zo_sgd: starting point dimension does not match the objective");

  RngStream rng(cfg.seed);
  SgdTrace trace;
  Vector x = x1;

  auto observe = [&](std::size_t t) {
    std::optional<double> gnorm;
    if (obj.has_gradient()) {
      const double gsq = obj.gradient(x).squaredNorm();
      gnorm = std::sqrt(gsq);
      if (!trace.min_grad_norm_sq || gsq < *trace.min_grad_norm_sq) trace.min_grad_norm_sq = gsq;
    }
    if (t == 1 || t == cfg.steps || t % cfg.record_every == 0) {
      const double value = obj(x);
      ++trace.evals;
      trace.records.push_back({t, value, gnorm});
    }
  };

  observe(1);
  for (std::size_t t = 1; t < cfg.steps; ++t) {
    const GradientEstimate g = estimate(obj, x, cfg.scheme, cfg.batch, cfg.mu, rng);
    trace.evals += g.evals;
    x -= cfg.eta * g.gradient;
    if (!x.allFinite() || x.norm() > kDivergenceNorm)
      throw DivergenceError("zo_sgd diverged at step " + std::to_string(t + 1), t + 1);
    observe(t + 1);
  }
  trace.final_point = std::move(x);
  return trace;
}

double max_step_nonconvex(const StepSizeInputs& in) {
  if (!(in.L > 0.0)) throw InvalidArgument("L must be positive");
  if (in.T == 0) throw InvalidArgument("T must be at least 1");
  const double dd = static_cast<double>(in.d);
  const double inner = 2.0 * in.delta * in.delta * dd + in.rho + 2.0 * in.delta + 1.0;
  const double second = 1.0 / (in.L * std::sqrt(2.0 * static_cast<double>(in.T) * inner));
  return std::min(1.0 / (2.0 * in.L), second);
}

double max_step_strongly_convex(const StepSizeInputs& in) {
  if (!(in.L > 0.0)) throw InvalidArgument("L must be positive");
  if (!in.c) throw InvalidArgument("the strongly convex step bound needs c");
  if (!(*in.c > 0.0)) throw InvalidArgument("c must be positive");
  const double dd = static_cast<double>(in.d);
  const double inner = 2.0 * in.delta * in.delta * dd + 2.0 * in.delta + 1.0 + in.rho;
  const double second = in.delta * *in.c / (4.0 * in.L * in.L) / inner;
  return std::min(1.0 / (2.0 * in.L), second);
}

double alpha_v(double L, double fourth_moment) { return L * L * L * fourth_moment; }

double beta_v(double delta, std::size_t d, double rho) {
  return 2.0 * delta * delta * static_cast<double>(d) + rho + 1.0 - 2.0 * delta;
}

double b_squared(double L, double f_star, double mean_f_xi_star) {
  return 2.0 * L * (f_star - mean_f_xi_star);
}

double strongly_convex_floor(const StepSizeInputs& in, double eta, double mu, double fourth_moment) {
  if (!in.c || !(*in.c > 0.0)) throw InvalidArgument("the strongly convex floor needs c > 0");
  const double b2 = in.f_gap_b2.value_or(0.0);
  const double beta = beta_v(in.delta, in.d, in.rho);
  return 2.0 * eta * (in.L * b2 * (1.0 + beta) + mu * mu * alpha_v(in.L, fourth_moment)) /
         (*in.c * in.delta);
}

double strongly_convex_bound(const StepSizeInputs& in, double eta, double mu, double fourth_moment,
                             double initial_gap, std::size_t t) {
  if (t == 0) throw InvalidArgument("iterate index is 1-based");
  const double rate = 1.0 - 0.5 * *in.c * in.delta * eta;
  return std::pow(rate, static_cast<double>(t - 1)) * initial_gap +
         strongly_convex_floor(in, eta, mu, fourth_moment);
}

Schedule corollary_schedule(double epsilon, std::size_t d, ScheduleMode mode, ScheduleConstants k) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (d == 0) throw InvalidArgument("dimension must be positive");
  const double dd = static_cast<double>(d);
  Schedule s;
  s.eta = k.k_eta * epsilon / dd;
  s.mu = k.k_mu * epsilon / dd;
  const double raw = mode == ScheduleMode::Nonconvex ? k.k_T * dd / (epsilon * epsilon)
                                                     : k.k_T * dd / epsilon;
  // Ignore rounding noise in eps^2 so 16 / 0.1^2 counts as exactly 1600.
  const double nearest = std::round(raw);
  const double ceiled = std::abs(raw - nearest) <= 1e-9 * raw ? nearest : std::ceil(raw);
  s.T = static_cast<std::size_t>(ceiled);
  return s;
}

}  // namespace zo
