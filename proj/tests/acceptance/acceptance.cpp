// Acceptance suite: one PASS/FAIL line per numbered check, nonzero exit if any fail.
// Tolerances and time limits are fixed here.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "zo/analysis.hpp"
#include "zo/config.hpp"
#include "zo/experiments.hpp"
#include "zo/objectives.hpp"
#include "zo/optimizer.hpp"
#include "zo/perturb.hpp"
#include "zo/poisson.hpp"
#include "zo/rng.hpp"

using namespace zo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  int id;
  std::string name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vector unit_ones(std::size_t d) { return Vector::Ones(Eigen::Index(d)) / std::sqrt(double(d)); }

// Mean tau_mse per (scheme, batch) over the seeds of a sweep report.
std::map<std::string, std::map<std::size_t, double>> sweep_means(const ExperimentReport& report) {
  std::map<std::string, std::map<std::size_t, MeanAccumulator>> acc;
  for (const auto& r : report.rows)
    if (r.metric == "tau_mse") acc[r.scheme][r.batch].add(r.value);
  std::map<std::string, std::map<std::size_t, double>> out;
  for (auto& [s, by_b] : acc)
    for (auto& [b, a] : by_b) out[s][b] = a.mean();
  return out;
}

std::string ratio_list(const std::map<std::size_t, double>& num, const std::map<std::size_t, double>& den,
                       std::size_t min_b) {
  std::string s;
  for (auto [b, v] : num)
    if (b >= min_b) s += fmt("%s%zu:%.3f", s.empty() ? "" : " ", b, v / den.at(b));
  return s;
}

int run_shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome gaussian_kurtosis() {
  RngStream rng(derive_seed(1, 1));
  const auto m = estimate_moments({SchemeKind::Gaussian, 1.0}, 16, 1000000, rng);
  const double rel = std::abs(m.fourth_moment / 288.0 - 1.0);
  const double z = (m.fourth_moment - 256.0) / m.fourth_moment_se;
  return {rel <= 0.02 && z > 3.0, fmt("E|v|^4 = %.3f (rel err %.4f), %.1f se above 256", m.fourth_moment, rel, z)};
}

Outcome constant_magnitude() {
  double worst = 0;
  std::uint64_t seed = 100;
  struct DD {
    std::size_t d;
    double delta;
  };
  for (auto kind : {SchemeKind::UniformSphere, SchemeKind::Rademacher, SchemeKind::RandomCoordinate})
    for (auto [d, delta] : {DD{16, 1.0}, DD{16, 1.0 / 16}, DD{8, 1.0}}) {
      RngStream rng(derive_seed(2, seed++));
      const auto m = estimate_moments({kind, delta}, d, 100000, rng);
      worst = std::max(worst, m.max_norm_sq_rel_error);
    }
  return {worst <= 1e-12, fmt("max | |v|^2/(d delta) - 1 | = %.3g over 9 x 1e5 draws", worst)};
}

Outcome dap_alignment() {
  const double delta = 1.0;
  std::vector<Vector> anchors(3, Vector(2));
  anchors[0] << 1, 0;
  anchors[1] << 1, 1;
  anchors[1] /= std::sqrt(2.0);
  anchors[2] << 0.2, 2;
  Vector e1_16 = Vector::Zero(16);
  e1_16[0] = 1;
  anchors.push_back(e1_16);
  anchors.push_back(Vector::LinSpaced(16, -1.0, 2.0));

  double worst_align = 0, worst_frob = 0;
  std::uint64_t idx = 0;
  for (const Vector& a : anchors) {
    const std::size_t d = std::size_t(a.size());
    RngStream rng(derive_seed(3, idx++));
    Matrix cov = Matrix::Zero(a.size(), a.size());
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      const Vector v = sample_dap(a, d, delta, rng);
      const double av = a.dot(v);
      worst_align = std::max(worst_align, std::abs(av * av / (delta * a.squaredNorm()) - 1.0));
      cov.selfadjointView<Eigen::Lower>().rankUpdate(v);
    }
    Matrix full = cov.selfadjointView<Eigen::Lower>();
    full /= double(n);
    worst_frob = std::max(worst_frob, (full / delta - Matrix::Identity(a.size(), a.size())).norm());
  }
  return {worst_align <= 1e-9 && worst_frob <= 0.1,
          fmt("max alignment rel err %.3g, max |cov/delta - I|_F %.4f (d = 2, 16)", worst_align, worst_frob)};
}

Outcome limit_values() {
  const Objective f = affine(unit_ones(16));
  const Vector x = Vector::Zero(16);
  struct Case {
    const char* scheme;
    double delta;
    double expect;
  };
  bool ok = true;
  std::string detail;
  std::uint64_t idx = 0;
  for (auto c : {Case{"uniform", 1.0, 15.0}, Case{"dap_exact", 1.0, 15.0}, Case{"gaussian", 1.0, 17.0},
                 Case{"uniform", 1.0 / 16, 0.9375}}) {
    RngStream rng(derive_seed(4, idx++));
    const auto s = empirical_estimator_mse(f, x, *parse_scheme(c.scheme, c.delta), 1e-3, 1000000, std::nullopt, rng);
    const double rel = std::abs(s.mean / c.expect - 1.0);
    ok = ok && rel <= 0.02;
    detail += fmt("%s%s(%.4g)=%.4f", detail.empty() ? "" : ", ", c.scheme, c.delta, s.mean);
  }
  return {ok, detail};
}

Outcome quadratic_sweep() {
  const auto report = run_experiment(load_experiment(fs::path(ZO_CONFIG_DIR) / "tau_mse_quadratic.cfg"));
  const auto m = sweep_means(report);
  bool exact_ok = true, est_ok = true;
  for (auto [b, u] : m.at("uniform")) {
    exact_ok = exact_ok && m.at("dap_exact").at(b) < u;
    if (b >= 64) est_ok = est_ok && m.at("dap_estimated").at(b) < u;
  }
  return {exact_ok && est_ok,
          fmt("dap_exact/uniform {%s}; dap_estimated/uniform b>=64 {%s}",
              ratio_list(m.at("dap_exact"), m.at("uniform"), 0).c_str(),
              ratio_list(m.at("dap_estimated"), m.at("uniform"), 64).c_str())};
}

Outcome product_sweep() {
  const auto report = run_experiment(load_experiment(fs::path(ZO_CONFIG_DIR) / "tau_mse_product.cfg"));
  const auto m = sweep_means(report);
  bool ok = true;
  for (auto [b, v] : m.at("dap_estimated"))
    if (b >= 32) ok = ok && v < m.at("uniform").at(b) && v < m.at("gaussian").at(b);
  return {ok, fmt("dap_estimated/uniform {%s}; dap_estimated/gaussian {%s}",
                  ratio_list(m.at("dap_estimated"), m.at("uniform"), 32).c_str(),
                  ratio_list(m.at("dap_estimated"), m.at("gaussian"), 32).c_str())};
}

Outcome step_sizes() {
  StepSizeInputs in;
  in.L = 1;
  in.c = 1;
  in.delta = 1;
  in.d = 16;
  in.rho = 0;
  in.T = 100;
  const double nc = max_step_nonconvex(in), sc = max_step_strongly_convex(in);
  const double e1 = std::abs(nc - 1.0 / std::sqrt(7000.0)), e2 = std::abs(sc - 1.0 / 140.0);
  return {e1 <= 1e-12 && e2 <= 1e-12, fmt("nonconvex %.10f (err %.2g), strongly convex %.10f (err %.2g)", nc, e1, sc, e2)};
}

Outcome contraction() {
  const std::size_t d = 16, T = 5000, seeds = 20;
  StepSizeInputs in;
  in.L = 2;
  in.c = 2;
  in.delta = 1;
  in.d = d;
  in.rho = 0;
  in.T = T;
  const double eta = max_step_strongly_convex(in), mu = 1e-5;
  const double fourth = *moment_profile({SchemeKind::UniformSphere, 1.0}, d).fourth_moment;

  const Objective f = squared_norm(d);
  std::vector<double> mean_gap(T, 0.0);
  for (std::size_t s = 0; s < seeds; ++s) {
    SgdConfig cfg;
    cfg.eta = eta;
    cfg.mu = mu;
    cfg.steps = T;
    cfg.batch = 1;
    cfg.scheme = {SchemeKind::UniformSphere, 1.0};
    cfg.seed = derive_seed(8, s);
    const auto trace = zo_sgd(f, Vector::Ones(Eigen::Index(d)), cfg);
    for (const auto& r : trace.records) mean_gap[r.step - 1] += r.value / double(seeds);  // f* = 0
  }
  // Envelope C (1 - c delta eta / 2)^(t-1) + floor with C the mean initial gap.
  const double C = mean_gap[0];
  double worst = 0;
  for (std::size_t t = 1; t <= T; ++t)
    worst = std::max(worst, mean_gap[t - 1] / strongly_convex_bound(in, eta, mu, fourth, C, t));
  const double drop = mean_gap[T - 1] / mean_gap[0];
  return {drop <= 1e-2 && worst <= 2.0,
          fmt("eta = %.6f, f(x_T)/f(x_1) = %.3g, max gap/envelope = %.3f", eta, drop, worst)};
}

Outcome poisson() {
  constexpr double pi = std::numbers::pi;
  auto exact = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  auto src = [&](double x, double y) { return -2 * pi * pi * exact(x, y); };
  double err[2] = {0, 0}, resid = 0;
  int k = 0;
  for (std::size_t n : {17u, 33u}) {
    const auto g = uniform_grid(n);
    const auto sol = poisson_solve(g, g, src, 0.0);
    const auto lap = apply_laplacian(sol);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        err[k] = std::max(err[k], std::abs(sol.values(Eigen::Index(i), Eigen::Index(j)) - exact(g[i], g[j])));
        if (i > 0 && j > 0 && i + 1 < n && j + 1 < n)
          resid = std::max(resid, std::abs(lap(Eigen::Index(i), Eigen::Index(j)) - src(g[i], g[j])) / (2 * pi * pi));
      }
    ++k;
  }
  const double ratio = err[0] / err[1];
  return {ratio >= 3.5 && ratio <= 4.5 && resid <= 1e-10,
          fmt("error ratio n=17/n=33 = %.4f, relative residual %.3g", ratio, resid)};
}

Outcome mesh() {
  const auto spec = load_experiment(fs::path(ZO_CONFIG_DIR) / "mesh.cfg");
  if (spec.steps < 200 || spec.seeds.size() < 5) return {false, "mesh config below 200 steps or 5 seeds"};
  const auto report = run_experiment(spec);
  std::map<std::string, MeanAccumulator> last, first;
  for (const auto& r : report.rows) {
    if (r.metric != "loss") continue;
    if (r.step == spec.steps) last[r.scheme].add(r.value);
    if (r.step == 1) first[r.scheme].add(r.value);
  }
  const double initial = first.at("uniform").mean();
  const double dap = last.at("dap_estimated").mean(), uni = last.at("uniform").mean(),
               gau = last.at("gaussian").mean();
  const bool ok = dap <= uni && dap <= gau && dap < initial && uni < initial && gau < initial;
  return {ok, fmt("initial %.6e; final dap %.6e, uniform %.6e, gaussian %.6e", initial, dap, uni, gau)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("zo_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string zo = ZO_BINARY;
  const std::string cfg = (fs::path(ZO_CONFIG_DIR) / "tau_mse_product.cfg").string();
  bool ok = true;
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i);
    // Second pass pins a single worker to show the thread count does not leak into the bytes.
    const std::string env = i == 0 ? "" : "ZO_THREADS=1 ";
    ok = ok && run_shell(env + zo + " run " + cfg + " --out " + (dir / ("run" + tag + ".csv")).string()) == 0;
    ok = ok && run_shell(zo + " verify --seed 7 > " + (dir / ("verify" + tag + ".txt")).string()) == 0;
  }
  const std::string r0 = slurp(dir / "run0.csv"), r1 = slurp(dir / "run1.csv");
  const std::string v0 = slurp(dir / "verify0.txt"), v1 = slurp(dir / "verify1.txt");
  fs::remove_all(dir);
  ok = ok && !r0.empty() && r0 == r1 && !v0.empty() && v0 == v1;
  return {ok, fmt("run csv %zu bytes %s, verify output %zu bytes %s", r0.size(), r0 == r1 ? "identical" : "DIFFER",
                  v0.size(), v0 == v1 ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<Check> checks = {
      {1, "gaussian kurtosis", 10, gaussian_kurtosis},
      {2, "constant magnitude", 5, constant_magnitude},
      {3, "dap alignment and covariance", 30, dap_alignment},
      {4, "limit mse on an affine objective", 60, limit_values},
      {5, "quadratic tau-mse ordering", 120, quadratic_sweep},
      {6, "product tau-mse ordering", 120, product_sweep},
      {7, "step-size formulas", 1, step_sizes},
      {8, "strongly convex contraction", 60, contraction},
      {9, "poisson convergence and residual", 10, poisson},
      {10, "mesh optimization ordering", 300, mesh},
      {11, "cli determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s <= 0 || secs < c.time_limit_s;
    if (!in_time) o.detail += fmt(" [over the %.0f s limit]", c.time_limit_s);
    const bool pass = o.passed && in_time;
    failed += !pass;
    std::printf("%s  %2d  %-34s %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu acceptance checks passed\n", checks.size() - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
