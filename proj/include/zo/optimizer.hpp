#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "zo/objective.hpp"

namespace zo {

struct SgdConfig {
  double eta = 1e-4;
  double mu = 1e-5;
  std::size_t steps = 1;   // horizon T: iterates x_1 .. x_T, so T - 1 updates
  std::size_t batch = 1;
  PerturbationScheme scheme;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;

  void validate() const;
};

struct SgdRecord {
  std::size_t step = 0;  // 1-based iterate index t
  double value = 0.0;    // f(x_t)
  std::optional<double> grad_norm;  // ||grad f(x_t)|| when an oracle exists
};

struct SgdTrace {
  std::vector<SgdRecord> records;  // strictly increasing in step
  Vector final_point;
  std::optional<double> min_grad_norm_sq;  // min_t ||grad f(x_t)||^2
  std::size_t evals = 0;
};

/// x_{t+1} = x_t - eta * g_t with g_t from estimate(). Records t = 1, every
/// record_every-th iterate and t = T. Throws DivergenceError when an iterate
/// is non-finite or its norm exceeds 1e12.
SgdTrace zo_sgd(const Objective& obj, const Vector& x1, const SgdConfig& cfg);

struct StepSizeInputs {
  double L = 1.0;
  std::optional<double> c;  // strong convexity
  double delta = 1.0;
  std::size_t d = 1;
  double rho = 0.0;         // E||v||^4 - delta^2 d^2
  std::size_t T = 1;
  std::optional<double> f_gap_b2;  // B^2 = 2L(f* - E f_xi*), reporting only
};

/// min{ 1/(2L), 1 / (L sqrt(2T(2 delta^2 d + rho + 2 delta + 1))) }
double max_step_nonconvex(const StepSizeInputs& in);
/// min{ 1/(2L), delta c / (4 L^2) / (2 delta^2 d + 2 delta + 1 + rho) }
double max_step_strongly_convex(const StepSizeInputs& in);

/// alpha_V = L^3 E||v||^4
double alpha_v(double L, double fourth_moment);
/// beta_V = 2 delta^2 d + rho + 1 - 2 delta
double beta_v(double delta, std::size_t d, double rho);
/// B^2 = 2L(f* - E f_xi*)
double b_squared(double L, double f_star, double mean_f_xi_star);

/// Stationary error term of the strongly convex rate:
/// 2 eta (L B^2 (1 + beta_V) + mu^2 alpha_V) / (c delta).
double strongly_convex_floor(const StepSizeInputs& in, double eta, double mu, double fourth_moment);
/// Right-hand side of the strongly convex rate at iterate t (1-based).
double strongly_convex_bound(const StepSizeInputs& in, double eta, double mu, double fourth_moment,
                             double initial_gap, std::size_t t);

enum class ScheduleMode { Nonconvex, StronglyConvex };

struct Schedule {
  double eta = 0.0;
  double mu = 0.0;
  std::size_t T = 0;
};

/// Multipliers for the hidden constants of the complexity schedule.
struct ScheduleConstants {
  double k_eta = 1.0;
  double k_mu = 1.0;
  double k_T = 1.0;
};

/// eta = k_eta eps / d, mu = k_mu eps / d, and T = ceil(k_T d / eps^2)
/// (nonconvex) or ceil(k_T d / eps) (strongly convex). eps must lie in (0, 1).
Schedule corollary_schedule(double epsilon, std::size_t d, ScheduleMode mode,
                            ScheduleConstants k = {});

}  // namespace zo
