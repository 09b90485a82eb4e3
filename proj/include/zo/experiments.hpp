#pragma once

#include <cstdint>

#include "zo/config.hpp"
#include "zo/objective.hpp"
#include "zo/report.hpp"

namespace zo {

/// One problem instance of an experiment: objective plus query/start point.
struct ProblemInstance {
  Objective objective;
  Vector point;
};

/// Deterministic instance for `seed`.
///   affine    : gradient ones / sqrt(d), point 0
///   sphere    : point ones
///   quadratic : A from derive_seed(seed, 0); point U[0.5, 1.5] with every
///               other entry zeroed (sparsity = half by default)
///   product   : point U[0.5, 1.5] with x_1 = 0 (sparsity = first by default)
///   mesh      : uniform coarse mesh
ProblemInstance make_instance(const ExperimentSpec& spec, std::uint64_t seed);

/// Worker count: ZO_THREADS when set and positive, else hardware concurrency.
unsigned worker_threads();

/// Runs every (scheme, batch, seed) cell, possibly in parallel, and returns
/// the sorted report. Output does not depend on the thread count.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace zo
