#include <doctest.h>

#include <cmath>

#include "zo/analysis.hpp"
#include "zo/errors.hpp"
#include "zo/objectives.hpp"
#include "zo/perturb.hpp"
#include "zo/rng.hpp"

using namespace zo;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector unit_vector(std::size_t d) {
  return Vector::Ones(static_cast<Eigen::Index>(d)) / std::sqrt(double(d));
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("variance lower bound") {
  CHECK(variance_lower_bound(unit_vector(16), 1.0, 16) == doctest::Approx(16));
  CHECK(variance_lower_bound(Vector::Zero(5), 1.0, 5) == 0.0);
  CHECK(variance_lower_bound(vec({2, 0, 0, 0}), 0.5, 4) == doctest::Approx(4));
}

TEST_CASE("variance upper bound") {
  const Vector a = vec({0.3, -1.2, 2.0});
  CHECK(variance_upper_bound(a, 0.7, 3, 0.0) == doctest::Approx(variance_lower_bound(a, 0.7, 3)));
  CHECK(variance_upper_bound(vec({1, 0, 0, 0}), 1.0, 4, 8.0) ==
        doctest::Approx(8.0 + std::sqrt(160.0) / 2.0).epsilon(1e-14));
  CHECK(variance_upper_bound(vec({1, 0, 0, 0}), 1.0, 4, 8.0) == doctest::Approx(14.3246).epsilon(1e-5));
  CHECK_THROWS_AS(variance_upper_bound(a, 1.0, 3, -1.0), InvalidArgument);
  const auto vb = variance_bounds(a, 1.0, 3, 5.0);
  CHECK(vb.lower <= vb.upper);
  CHECK(vb.min_mse == doctest::Approx(min_variance_mse(a.squaredNorm(), 1.0, 3)));
}

TEST_CASE("minimum-variance value") {
  CHECK(min_variance_mse(1.0, 1.0, 16) == doctest::Approx(15));
  CHECK(min_variance_mse(1.0, 1.0 / 16, 16) == doctest::Approx(0.9375));
  CHECK(min_variance_mse(3.0, 1.0, 1) == 0.0);
  const Vector a = vec({1, 2});
  CHECK(mse_upper_bound(a, 1.0, 2, 0.0) == doctest::Approx(min_variance_mse(5.0, 1.0, 2)));
}

TEST_CASE("mse") {
  CHECK(mse(vec({1, 2}), vec({1, 2})) == 0.0);
  CHECK(mse(vec({0.2, 5}), vec({0, 0})) == doctest::Approx(25.04));
  CHECK(mse(vec({2.2, 2.2}), vec({2, 0})) == doctest::Approx(4.88));
  CHECK_THROWS_AS(mse(vec({1}), vec({1, 2})), InvalidArgument);
}

TEST_CASE("tau mse") {
  const Vector truth = vec({2, 0});
  const Vector est = truth + vec({0.2, 5});
  CHECK(tau_mse(est, truth, 1e-4) == doctest::Approx(0.04));
  CHECK(tau_mse(est, truth, 2.5) == 0.0);
  const Vector dense = vec({1, -3, 0.5});
  const Vector noisy = dense + vec({0.1, 0.2, -0.3});
  CHECK(tau_mse(noisy, dense, 0.0) == doctest::Approx(mse(noisy, dense)));
  CHECK_THROWS_AS(tau_mse(vec({1}), vec({1, 2}), 0.1), InvalidArgument);

  // Ties at exactly tau are masked out.
  const auto mask = TauMask::from_reference(vec({0.5, -0.5, 0.6}), 0.5);
  CHECK(mask.count() == 1);
  CHECK_FALSE(mask.mask[0]);
  CHECK(mask.mask[2]);
  CHECK(tau_mse(vec({1, 1, 1}), vec({0.5, -0.5, 0.6}), mask) == doctest::Approx(0.16));
}

TEST_CASE("tau mse never exceeds mse") {
  RngStream rng(90);
  for (int k = 0; k < 200; ++k) {
    const Vector truth = sample_gaussian(8, 1.0, rng);
    const Vector est = sample_gaussian(8, 1.0, rng);
    const double tau = rng.uniform(0, 1.5);
    REQUIRE(tau_mse(est, truth, tau) <= mse(est, truth) + 1e-15);
  }
}

TEST_CASE("mean accumulator") {
  MeanAccumulator acc;
  for (double x : {1.0, 2.0, 3.0, 4.0}) acc.add(x);
  CHECK(acc.count() == 4);
  CHECK(acc.mean() == doctest::Approx(2.5));
  CHECK(acc.variance() == doctest::Approx(5.0 / 3.0));
  CHECK(acc.standard_error() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("empirical mse hits the limit values on an affine objective") {
  const Objective f = affine(unit_vector(16));
  const Vector x = Vector::Zero(16);
  struct Case {
    const char* scheme;
    double delta;
    double expect;
  };
  for (auto c : {Case{"uniform", 1.0, 15.0}, Case{"gaussian", 1.0, 17.0}, Case{"dap_exact", 1.0, 15.0},
                 Case{"uniform", 1.0 / 16, 0.9375}}) {
    RngStream rng(91);
    const auto s = empirical_estimator_mse(f, x, *parse_scheme(c.scheme, c.delta), 1e-3, 1000000,
                                           std::nullopt, rng);
    CAPTURE(c.scheme);
    CHECK(s.n == 1000000);
    CHECK(s.mean == doctest::Approx(c.expect).epsilon(0.02));
    CHECK_FALSE(s.tau_mean.has_value());
  }
}

TEST_CASE("minimum-variance sandwich") {
  const Vector a = vec({0.2, 2.0, -0.4, 1.0, 0.0, 0.3});
  const Objective f = affine(a, 1.5);
  const Vector x = Vector::Constant(6, 0.25);
  for (const char* name : {"gaussian", "uniform", "rademacher", "coordinate", "dap_exact"})
    for (double delta : {1.0, 1.0 / 6}) {
      const auto scheme = *parse_scheme(name, delta);
      RngStream rng(92);
      const auto s = empirical_estimator_mse(f, x, scheme, 1e-2, 200000, 0.1, rng);
      const double lo = min_variance_mse(a.squaredNorm(), delta, 6);
      const auto prof = moment_profile(scheme, 6);
      CAPTURE(name);
      CAPTURE(delta);
      CHECK(s.mean >= lo - 3 * s.se - 1e-9 * lo);
      if (prof.rho) CHECK(s.mean <= mse_upper_bound(a, delta, 6, *prof.rho) + 3 * s.se);
      REQUIRE(s.tau_mean);
      CHECK(*s.tau_mean <= s.mean + 1e-12);
    }
}

TEST_CASE("empirical mse needs an oracle") {
  Objective f;
  f.dim = 3;
  f.eval = [](const Vector& x) { return x.sum(); };
  RngStream rng(93);
  CHECK_THROWS_AS(empirical_estimator_mse(f, Vector::Zero(3), {SchemeKind::UniformSphere, 1.0}, 1e-3,
                                          10, std::nullopt, rng),
                  InvalidArgument);
}

}
