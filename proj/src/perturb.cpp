#include "zo/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "zo/errors.hpp"

namespace zo {

namespace {

void check_args(std::size_t d, double delta) {
  if (d == 0) throw InvalidArgument("dimension must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("delta must be finite and positive");
}

}  // namespace

void PerturbationScheme::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("delta must be finite and positive");
}

std::string PerturbationScheme::name() const {
  switch (kind) {
    case SchemeKind::Gaussian: return "gaussian";
    case SchemeKind::UniformSphere: return "uniform";
    case SchemeKind::Rademacher: return "rademacher";
    case SchemeKind::RandomCoordinate: return "coordinate";
    case SchemeKind::DAP:
      return anchor_policy == AnchorPolicy::ExactGradient ? "dap_exact" : "dap_estimated";
  }
  return "unknown";
}

std::optional<PerturbationScheme> parse_scheme(std::string_view name, double delta) {
  PerturbationScheme s;
  s.delta = delta;
  if (name == "gaussian") {
    s.kind = SchemeKind::Gaussian;
  } else if (name == "uniform" || name == "uniform_sphere") {
    s.kind = SchemeKind::UniformSphere;
  } else if (name == "rademacher") {
    s.kind = SchemeKind::Rademacher;
  } else if (name == "coordinate" || name == "random_coordinate") {
    s.kind = SchemeKind::RandomCoordinate;
  } else if (name == "dap_exact") {
    s.kind = SchemeKind::DAP;
    s.anchor_policy = AnchorPolicy::ExactGradient;
  } else if (name == "dap_estimated" || name == "dap") {
    s.kind = SchemeKind::DAP;
    s.anchor_policy = AnchorPolicy::EstimatedGradient;
  } else {
    return std::nullopt;
  }
  return s;
}

Vector sample_gaussian(std::size_t d, double delta, RngStream& rng) {
  check_args(d, delta);
  const double scale = std::sqrt(delta);
  Vector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

Vector sample_uniform_sphere(std::size_t d, double delta, RngStream& rng) {
  check_args(d, delta);
  Vector v(static_cast<Eigen::Index>(d));
  double norm_sq = 0.0;
  // A Gaussian draw of exactly zero norm has probability zero, but redraw anyway.
  do {
    for (auto& x : v) x = rng.normal();
    norm_sq = v.squaredNorm();
  } while (!(norm_sq > 0.0));
  v *= std::sqrt(static_cast<double>(d) * delta / norm_sq);
  return v;
}

Vector sample_rademacher(std::size_t d, double delta, RngStream& rng) {
  check_args(d, delta);
  const double scale = std::sqrt(delta);
  Vector v(static_cast<Eigen::Index>(d));
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (i % 64 == 0) bits = rng.next_u64();
    v[static_cast<Eigen::Index>(i)] = (bits & 1U) != 0 ? scale : -scale;
    bits >>= 1;
  }
  return v;
}

Vector sample_coordinate(std::size_t d, double delta, RngStream& rng) {
  check_args(d, delta);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v[static_cast<Eigen::Index>(rng.below(d))] = std::sqrt(static_cast<double>(d) * delta);
  return v;
}

Vector project_onto_hyperplane(const Vector& v, const Vector& u, double c) {
  if (v.size() != u.size()) throw InvalidArgument("projection: size mismatch between v and u");
  const double u_sq = u.squaredNorm();
  if (!(u_sq > 0.0)) throw DegeneratePlane("projection: hyperplane normal has zero length");
  return v - u * ((u.dot(v) - c) / u_sq);
}

Vector sample_dap(const Vector& anchor, std::size_t d, double delta, RngStream& rng) {
  check_args(d, delta);
  if (static_cast<std::size_t>(anchor.size()) != d)
    throw InvalidArgument("dap: anchor dimension does not match d");
  Vector v_ini = sample_uniform_sphere(d, delta, rng);
  const double xi = rng.sign();
  const double anchor_sq = anchor.squaredNorm();
  if (!(anchor_sq > 0.0)) return v_ini;
  return project_onto_hyperplane(v_ini, anchor, xi * std::sqrt(delta * anchor_sq));
}

Vector sample(const PerturbationScheme& scheme, std::size_t d, RngStream& rng,
              const Vector* anchor) {
  switch (scheme.kind) {
    case SchemeKind::Gaussian: return sample_gaussian(d, scheme.delta, rng);
    case SchemeKind::UniformSphere: return sample_uniform_sphere(d, scheme.delta, rng);
    case SchemeKind::Rademacher: return sample_rademacher(d, scheme.delta, rng);
    case SchemeKind::RandomCoordinate: return sample_coordinate(d, scheme.delta, rng);
    case SchemeKind::DAP:
      if (anchor == nullptr) throw InvalidArgument("dap: sampling requires an anchor vector");
      return sample_dap(*anchor, d, scheme.delta, rng);
  }
  throw InvalidArgument("unknown perturbation scheme");
}

MomentProfile moment_profile(const PerturbationScheme& scheme, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double delta_sq = scheme.delta * scheme.delta;
  MomentProfile p;
  switch (scheme.kind) {
    case SchemeKind::UniformSphere:
    case SchemeKind::Rademacher:
    case SchemeKind::RandomCoordinate:
      p.fourth_moment = delta_sq * dd * dd;
      p.rho = 0.0;
      break;
    case SchemeKind::Gaussian:
      p.fourth_moment = delta_sq * (dd * dd + 2.0 * dd);
      p.rho = 2.0 * delta_sq * dd;
      break;
    case SchemeKind::DAP:
      break;
  }
  return p;
}

MomentProfile MomentEstimate::profile(double delta, std::size_t d) const {
  const double dd = static_cast<double>(d);
  MomentProfile p;
  p.fourth_moment = fourth_moment;
  p.rho = fourth_moment - delta * delta * dd * dd;
  p.empirical_skew_vector = skew;
  return p;
}

MomentEstimate estimate_moments(const PerturbationScheme& scheme, std::size_t d, std::size_t n,
                                RngStream& rng, const Vector* anchor) {
  if (n < 2) throw InvalidArgument("moment estimate needs at least two draws");
  scheme.validate();
  const auto di = static_cast<Eigen::Index>(d);
  const double target = static_cast<double>(d) * scheme.delta;
  MomentEstimate est;
  est.n = n;
  est.covariance = Matrix::Zero(di, di);
  est.skew = Vector::Zero(di);
  // Welford running mean / variance of ||v||^4.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vector v = sample(scheme, d, rng, anchor);
    const double nsq = v.squaredNorm();
    const double q = nsq * nsq;
    const double dq = q - mean;
    mean += dq / static_cast<double>(k + 1);
    m2 += dq * (q - mean);
    est.covariance.selfadjointView<Eigen::Lower>().rankUpdate(v);
    est.skew += nsq * v;
    est.max_norm_sq_rel_error = std::max(est.max_norm_sq_rel_error, std::abs(nsq / target - 1.0));
  }
  const double nn = static_cast<double>(n);
  Matrix full = est.covariance.selfadjointView<Eigen::Lower>();
  est.covariance = full / nn;
  est.skew /= nn;
  est.fourth_moment = mean;
  est.fourth_moment_se = std::sqrt(m2 / (nn - 1.0) / nn);
  return est;
}

}  // namespace zo
