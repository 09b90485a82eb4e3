#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zo/mesh.hpp"

namespace zo {

/// Flat `key = value` config. `#` starts a comment; lists are comma-separated.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::vector<std::string> get_list(const std::string& key, std::vector<std::string> fallback) const;
  std::vector<std::size_t> get_size_list(const std::string& key, std::vector<std::size_t> fallback) const;
  std::vector<std::uint64_t> get_seed_list(const std::string& key, std::vector<std::uint64_t> fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

enum class ExperimentKind { VarianceBench, TauMseSweep, Optimize, Mesh };

std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::VarianceBench;
  std::string objective = "affine";          // affine, sphere, quadratic, product, mesh
  std::vector<std::string> schemes{"uniform"};
  std::size_t d = 16;
  double delta = 1.0;
  double mu = 1e-5;
  double eta = 1e-4;
  std::vector<std::size_t> batches{2};
  std::size_t steps = 100;
  std::vector<std::uint64_t> seeds{1};
  std::optional<double> tau;
  std::size_t trials = 1;        // estimates averaged per row (sweep), draws per row (variance)
  std::size_t record_every = 1;
  std::string sparsity = "default";  // default, none, half, first
  MeshProblem mesh;
};

/// Builds a spec from a parsed config. Throws ConfigError on unknown keys,
/// kinds, schemes or objectives and on malformed values.
ExperimentSpec experiment_from_config(const KeyValueConfig& cfg);
ExperimentSpec load_experiment(const std::filesystem::path& path);

}  // namespace zo
