#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "zo/rng.hpp"

namespace zo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class SchemeKind { Gaussian, UniformSphere, Rademacher, RandomCoordinate, DAP };

/// Where a DAP sampler gets its anchor direction.
enum class AnchorPolicy {
  ExactGradient,      // the objective's gradient oracle
  EstimatedGradient,  // a uniform-sphere pre-estimate (two-stage pipeline)
};

/// A delta-unbiased perturbation family: E[v v^T] = delta * I.
struct PerturbationScheme {
  SchemeKind kind = SchemeKind::UniformSphere;
  double delta = 1.0;
  AnchorPolicy anchor_policy = AnchorPolicy::ExactGradient;

  /// Throws InvalidArgument unless delta is finite and positive.
  void validate() const;
  /// Canonical short name: gaussian, uniform, rademacher, coordinate,
  /// dap_exact, dap_estimated.
  std::string name() const;
};

/// Parses the canonical names produced by PerturbationScheme::name().
std::optional<PerturbationScheme> parse_scheme(std::string_view name, double delta);

/// Coordinates i.i.d. N(0, delta).
Vector sample_gaussian(std::size_t d, double delta, RngStream& rng);
/// Uniform on the sphere ||v||^2 = d * delta.
Vector sample_uniform_sphere(std::size_t d, double delta, RngStream& rng);
/// Coordinates i.i.d. +-sqrt(delta).
Vector sample_rademacher(std::size_t d, double delta, RngStream& rng);
/// sqrt(d * delta) * e_i with i uniform. The sign is always positive.
Vector sample_coordinate(std::size_t d, double delta, RngStream& rng);

/// Orthogonal projection of v onto {w : u^T w = c}.
/// Throws DegeneratePlane when u = 0 and InvalidArgument on a size mismatch.
Vector project_onto_hyperplane(const Vector& v, const Vector& u, double c);

/// Directionally aligned perturbation anchored at `anchor`.
///
/// Draws v_ini uniform on the sphere of squared radius d * delta and a fair
/// sign xi, then projects v_ini onto {v : a^T v = xi * sqrt(delta) * ||a||}.
/// Every output satisfies (a^T v)^2 = delta * ||a||^2 and the law keeps
/// E[v v^T] = delta * I. A zero anchor returns v_ini unprojected.
Vector sample_dap(const Vector& anchor, std::size_t d, double delta, RngStream& rng);

/// Sample one perturbation. DAP requires an anchor; the others ignore it.
Vector sample(const PerturbationScheme& scheme, std::size_t d, RngStream& rng,
              const Vector* anchor = nullptr);

/// Analytic fourth-moment profile, when one exists.
struct MomentProfile {
  std::optional<double> fourth_moment;  // E||v||^4
  std::optional<double> rho;            // E||v||^4 - delta^2 d^2
  Vector empirical_skew_vector;         // estimate of E[||v||^2 v]; empty when not estimated
};

/// Closed forms: constant-magnitude schemes give delta^2 d^2 (rho = 0),
/// Gaussian gives delta^2 (d^2 + 2d). DAP has no closed form here.
MomentProfile moment_profile(const PerturbationScheme& scheme, std::size_t d);

/// Monte-Carlo moment summary over n draws.
struct MomentEstimate {
  std::size_t n = 0;
  double fourth_moment = 0.0;     // mean ||v||^4
  double fourth_moment_se = 0.0;  // standard error of that mean
  Matrix covariance;              // mean v v^T
  Vector skew;                    // mean ||v||^2 v
  double max_norm_sq_rel_error = 0.0;  // max | ||v||^2 / (d delta) - 1 |

  /// The profile implied by this estimate.
  MomentProfile profile(double delta, std::size_t d) const;
};

MomentEstimate estimate_moments(const PerturbationScheme& scheme, std::size_t d, std::size_t n,
                                RngStream& rng, const Vector* anchor = nullptr);

}  // namespace zo
