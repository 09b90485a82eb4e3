#include "zo/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "zo/analysis.hpp"
#include "zo/errors.hpp"
#include "zo/estimator.hpp"
#include "zo/mesh.hpp"
#include "zo/objectives.hpp"
#include "zo/optimizer.hpp"

namespace zo {

namespace {

std::vector<std::size_t> zero_coordinates(const ExperimentSpec& spec) {
  std::string mode = spec.sparsity;
  if (mode == "default") mode = spec.objective == "product" ? "first" : "half";
  if (mode == "half") return half_mask(spec.d);
  if (mode == "first") return {0};
  return {};
}

struct Cell {
  std::string scheme;
  std::size_t batch;
  std::uint64_t seed;
};

ReportRow base_row(const ExperimentSpec& spec, const Cell& cell) {
  ReportRow r;
  r.experiment = spec.name;
  r.scheme = cell.scheme;
  r.d = spec.d;
  r.delta = spec.delta;
  r.mu = spec.mu;
  r.batch = cell.batch;
  r.seed = cell.seed;
  return r;
}

void push(std::vector<ReportRow>& rows, ReportRow row, std::size_t step, const char* metric, double value) {
  row.step = step;
  row.metric = metric;
  row.value = value;
  rows.push_back(std::move(row));
}

std::vector<ReportRow> variance_cell(const ExperimentSpec& spec, const ProblemInstance& inst,
                                     const Cell& cell) {
  const PerturbationScheme scheme = *parse_scheme(cell.scheme, spec.delta);
  RngStream rng(derive_seed(cell.seed, 2));
  const MseSummary s = empirical_estimator_mse(inst.objective, inst.point, scheme, spec.mu,
                                               spec.trials, spec.tau, rng);
  const Vector a = inst.objective.gradient(inst.point);
  std::vector<ReportRow> rows;
  const ReportRow row = base_row(spec, cell);
  push(rows, row, 0, "mse_mean", s.mean);
  push(rows, row, 0, "mse_se", s.se);
  if (s.tau_mean) {
    push(rows, row, 0, "tau_mse_mean", *s.tau_mean);
    push(rows, row, 0, "tau_mse_se", *s.tau_se);
  }
  push(rows, row, 0, "min_variance_mse", min_variance_mse(a.squaredNorm(), spec.delta, spec.d));
  const MomentProfile profile = moment_profile(scheme, spec.d);
  if (profile.rho) {
    push(rows, row, 0, "mse_upper_bound", mse_upper_bound(a, spec.delta, spec.d, *profile.rho));
    push(rows, row, 0, "fourth_moment", *profile.fourth_moment);
  }
  return rows;
}

std::vector<ReportRow> sweep_cell(const ExperimentSpec& spec, const ProblemInstance& inst,
                                  const Cell& cell) {
  const PerturbationScheme scheme = *parse_scheme(cell.scheme, spec.delta);
  RngStream rng(derive_seed(cell.seed, 1000 + cell.batch));
  const Vector truth = inst.objective.gradient(inst.point);
  const TauMask mask = TauMask::from_reference(truth, spec.tau.value_or(0.0));
  MeanAccumulator tau_acc;
  MeanAccumulator mse_acc;
  for (std::size_t k = 0; k < spec.trials; ++k) {
    const GradientEstimate g = estimate(inst.objective, inst.point, scheme, cell.batch, spec.mu, rng);
    tau_acc.add(tau_mse(g.gradient, truth, mask));
    mse_acc.add(mse(g.gradient, truth));
  }
  std::vector<ReportRow> rows;
  const ReportRow row = base_row(spec, cell);
  push(rows, row, 0, "tau_mse", tau_acc.mean());
  push(rows, row, 0, "mse", mse_acc.mean());
  return rows;
}

std::vector<ReportRow> optimize_cell(const ExperimentSpec& spec, const ProblemInstance& inst,
                                     const Cell& cell) {
  SgdConfig cfg;
  cfg.eta = spec.eta;
  cfg.mu = spec.mu;
  cfg.steps = spec.steps;
  cfg.batch = cell.batch;
  cfg.scheme = *parse_scheme(cell.scheme, spec.delta);
  cfg.seed = derive_seed(cell.seed, 3);
  cfg.record_every = spec.record_every;
  const SgdTrace trace = zo_sgd(inst.objective, inst.point, cfg);
  std::vector<ReportRow> rows;
  const ReportRow row = base_row(spec, cell);
  for (const auto& rec : trace.records) {
    push(rows, row, rec.step, "loss", rec.value);
    if (rec.grad_norm) push(rows, row, rec.step, "grad_norm_sq", *rec.grad_norm * *rec.grad_norm);
  }
  return rows;
}

}  // namespace

ProblemInstance make_instance(const ExperimentSpec& spec, std::uint64_t seed) {
  const std::size_t d = spec.d;
  const auto di = static_cast<Eigen::Index>(d);
  if (spec.objective == "affine")
    return {affine(Vector::Ones(di) / std::sqrt(static_cast<double>(d))), Vector::Zero(di)};
  if (spec.objective == "sphere") return {squared_norm(d), Vector::Ones(di)};
  if (spec.objective == "quadratic" || spec.objective == "product") {
    const auto zeros = zero_coordinates(spec);
    RngStream point_rng(derive_seed(seed, 1));
    Vector x = sparse_query_point(d, zeros, point_rng);
    if (spec.objective == "product") return {product(d), std::move(x)};
    return {quadratic(QuadraticSpec{derive_seed(seed, 0), d, {}}), std::move(x)};
  }
  if (spec.objective == "mesh") return {mesh_objective(spec.mesh), uniform_mesh_point(spec.mesh)};
  throw ConfigError("unknown objective '" + spec.objective + "'");
}

unsigned worker_threads() {
  if (const char* env = std::getenv("ZO_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  const bool batched_kind = spec.kind != ExperimentKind::VarianceBench;
  for (const auto& s : spec.schemes)
    for (auto b : batched_kind ? spec.batches : std::vector<std::size_t>{1})
      for (auto seed : spec.seeds) cells.push_back({s, b, seed});

  // The mesh fine solution is shared by every cell.
  std::optional<ProblemInstance> shared;
  if (spec.kind == ExperimentKind::Mesh) shared = make_instance(spec, 0);

  std::vector<std::vector<ReportRow>> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& cell = cells[i];
        const ProblemInstance inst = shared ? *shared : make_instance(spec, cell.seed);
        switch (spec.kind) {
          case ExperimentKind::VarianceBench: results[i] = variance_cell(spec, inst, cell); break;
          case ExperimentKind::TauMseSweep: results[i] = sweep_cell(spec, inst, cell); break;
          case ExperimentKind::Optimize:
          case ExperimentKind::Mesh: results[i] = optimize_cell(spec, inst, cell); break;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(cells.size()));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentReport report;
  for (auto& r : results) report.rows.insert(report.rows.end(), r.begin(), r.end());
  report.sort();
  return report;
}

}  // namespace zo
