#include "zo/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "zo/analysis.hpp"
#include "zo/objectives.hpp"
#include "zo/perturb.hpp"

namespace zo {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

struct Suite {
  std::vector<CheckResult> results;
  std::uint64_t base;
  std::uint64_t next_index = 0;

  RngStream stream() { return RngStream(derive_seed(base, next_index++)); }
  void add(std::string name, bool ok, std::string detail) {
    results.push_back({std::move(name), ok, std::move(detail)});
  }
};

std::string delta_label(double delta, std::size_t d) {
  return delta == 1.0 ? "1" : "1/" + std::to_string(d);
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Suite suite{{}, options.seed};
  constexpr std::size_t kN = 100000;

  const std::vector<SchemeKind> kinds = {SchemeKind::Gaussian, SchemeKind::UniformSphere,
                                         SchemeKind::Rademacher, SchemeKind::RandomCoordinate,
                                         SchemeKind::DAP};

  // delta-unbiasedness and the fourth-moment lower bound.
  for (std::size_t d : {2UL, 8UL, 16UL}) {
    for (double delta : {1.0, 1.0 / static_cast<double>(d)}) {
      RngStream anchor_rng = suite.stream();
      Vector anchor(static_cast<Eigen::Index>(d));
      for (auto& a : anchor) a = anchor_rng.normal();
      for (SchemeKind kind : kinds) {
        const PerturbationScheme scheme{kind, delta, AnchorPolicy::ExactGradient};
        RngStream rng = suite.stream();
        const MomentEstimate est = estimate_moments(scheme, d, kN, rng, &anchor);
        const std::string tag = scheme.name() + " d=" + std::to_string(d) + " delta=" + delta_label(delta, d);
        const Matrix eye = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        const double frob = (est.covariance / delta - eye).norm();
        suite.add("delta-unbiased " + tag, frob <= 0.1, fmt("||cov/delta - I||_F = %.4f (<= 0.1)", frob));
        const double floor = delta * delta * static_cast<double>(d * d);
        const double slack = 3.0 * est.fourth_moment_se + 1e-12 * floor;
        suite.add("fourth-moment lower bound " + tag, est.fourth_moment >= floor - slack,
                  fmt("E||v||^4 = %.4f, floor %.4f, 3se %.4f", est.fourth_moment, floor,
                      3.0 * est.fourth_moment_se));
      }
    }
  }

  // Constant magnitude.
  const std::vector<std::pair<std::size_t, double>> magnitude_cases = {{16, 1.0}, {16, 1.0 / 16.0}, {8, 1.0}};
  for (auto [d, delta] : magnitude_cases) {
    for (SchemeKind kind : {SchemeKind::UniformSphere, SchemeKind::Rademacher, SchemeKind::RandomCoordinate}) {
      const PerturbationScheme scheme{kind, delta, AnchorPolicy::ExactGradient};
      RngStream rng = suite.stream();
      double worst = 0.0;
      const double target = static_cast<double>(d) * delta;
      for (std::size_t k = 0; k < kN; ++k)
        worst = std::max(worst, std::abs(sample(scheme, d, rng).squaredNorm() / target - 1.0));
      suite.add("constant magnitude " + scheme.name() + " d=" + std::to_string(d) + " delta=" + delta_label(delta, d),
                worst <= 1e-12, fmt("max relative error %.3e (<= 1e-12)", worst));
    }
  }

  // DAP alignment.
  {
    std::vector<Vector> anchors;
    anchors.push_back((Vector(2) << 1.0, 0.0).finished());
    anchors.push_back((Vector(2) << 1.0, 1.0).finished() / std::sqrt(2.0));
    anchors.push_back((Vector(2) << 0.2, 2.0).finished());
    Vector wide = Vector::LinSpaced(16, -1.0, 2.0);
    anchors.push_back(wide);
    for (const Vector& a : anchors) {
      RngStream rng = suite.stream();
      const std::size_t d = static_cast<std::size_t>(a.size());
      double worst = 0.0;
      const double target = a.squaredNorm();
      for (std::size_t k = 0; k < kN; ++k) {
        const double proj = a.dot(sample_dap(a, d, 1.0, rng));
        worst = std::max(worst, std::abs(proj * proj / target - 1.0));
      }
      suite.add("dap alignment d=" + std::to_string(d) + " |a|=" + fmt("%.4f", a.norm()), worst <= 1e-9,
                fmt("max relative error %.3e (<= 1e-9)", worst));
    }
  }

  // Independent-coordinate trace identity for Rademacher.
  {
    const std::size_t d = 16;
    RngStream rng = suite.stream();
    MeanAccumulator trace_acc;
    MeanAccumulator fourth_sum;
    for (std::size_t k = 0; k < kN; ++k) {
      const Vector v = sample_rademacher(d, 1.0, rng);
      const Matrix outer = v * v.transpose();
      trace_acc.add((outer * outer).trace());
      fourth_sum.add(v.array().pow(4).sum());
    }
    const double predicted = fourth_sum.mean() + static_cast<double>(d * (d - 1));
    const double rel = std::abs(trace_acc.mean() / predicted - 1.0);
    suite.add("rademacher trace identity d=16", rel <= 0.02,
              fmt("E Tr((vv^T)^2) = %.4f, sum E v_i^4 + d(d-1) = %.4f", trace_acc.mean(), predicted));
  }

  // Variance theory on an affine objective with ||grad|| = 1.
  const std::size_t d = 16;
  const Vector a = Vector::Ones(static_cast<Eigen::Index>(d)) / 4.0;
  const Objective lin = affine(a);
  const Vector origin = Vector::Zero(static_cast<Eigen::Index>(d));
  auto measured = [&](SchemeKind kind, double delta, std::size_t n) {
    PerturbationScheme scheme{kind, delta, AnchorPolicy::ExactGradient};
    if (options.mislabel_gaussian && kind == SchemeKind::Gaussian) scheme.kind = SchemeKind::UniformSphere;
    RngStream rng = suite.stream();
    return empirical_estimator_mse(lin, origin, scheme, 1e-4, n, std::nullopt, rng);
  };

  {
    PerturbationScheme g{SchemeKind::Gaussian, 1.0, AnchorPolicy::ExactGradient};
    if (options.mislabel_gaussian) g.kind = SchemeKind::UniformSphere;
    RngStream rng = suite.stream();
    const MomentEstimate est = estimate_moments(g, d, 1000000, rng);
    const double rel = std::abs(est.fourth_moment / 288.0 - 1.0);
    suite.add("gaussian kurtosis d=16", rel <= 0.02 && est.fourth_moment - 256.0 > 3.0 * est.fourth_moment_se,
              fmt("E||v||^4 = %.3f (288 +- 2%%), se %.3f", est.fourth_moment, est.fourth_moment_se));
  }

  for (double delta : {1.0, 1.0 / 16.0}) {
    const double floor = min_variance_mse(1.0, delta, d);
    for (SchemeKind kind : {SchemeKind::UniformSphere, SchemeKind::Rademacher,
                            SchemeKind::RandomCoordinate, SchemeKind::DAP}) {
      const MseSummary s = measured(kind, delta, kN);
      const PerturbationScheme named{kind, delta, AnchorPolicy::ExactGradient};
      const bool ok = std::abs(s.mean - floor) <= 3.0 * s.se + 1e-9 * floor;
      suite.add("min variance " + named.name() + " delta=" + delta_label(delta, d), ok,
                fmt("mse %.5f +- %.5f, floor %.5f", s.mean, s.se, floor));
    }
  }

  {
    const MseSummary s = measured(SchemeKind::Gaussian, 1.0, kN);
    const double floor = min_variance_mse(1.0, 1.0, d);
    suite.add("gaussian exceeds min variance", s.mean - floor > 3.0 * s.se,
              fmt("mse %.4f +- %.4f, floor %.4f", s.mean, s.se, floor));
  }

  for (SchemeKind kind : {SchemeKind::Gaussian, SchemeKind::UniformSphere, SchemeKind::Rademacher,
                          SchemeKind::RandomCoordinate}) {
    const PerturbationScheme named{kind, 1.0, AnchorPolicy::ExactGradient};
    const double rho = *moment_profile(named, d).rho;
    const MseSummary s = measured(kind, 1.0, kN);
    const double lo = min_variance_mse(1.0, 1.0, d);
    const double hi = mse_upper_bound(a, 1.0, d, rho);
    const double slack = 3.0 * s.se + 1e-9 * hi;
    suite.add("variance sandwich " + named.name(), s.mean >= lo - slack && s.mean <= hi + slack,
              fmt("%.4f <= %.4f <= %.4f", lo, s.mean, hi));
  }

  return suite.results;
}

std::string format_verification(const std::vector<CheckResult>& results) {
  std::string out;
  std::size_t passed = 0;
  for (const auto& r : results) {
    out += r.passed ? "PASS  " : "FAIL  ";
    out += r.name;
    out += "  [";
    out += r.detail;
    out += "]\n";
    passed += r.passed ? 1 : 0;
  }
  out += std::to_string(passed) + "/" + std::to_string(results.size()) + " checks passed\n";
  return out;
}

}  // namespace zo
