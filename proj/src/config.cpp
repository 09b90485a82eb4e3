#include "zo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "zo/errors.hpp"
#include "zo/perturb.hpp"

namespace zo {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + text + "'");
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key) != 0)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.values_.emplace(std::move(key), std::move(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> KeyValueConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

std::string KeyValueConfig::get_string(const std::string& key, std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? parse_double(key, *v) : fallback;
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) const {
  auto v = get(key);
  return v ? static_cast<std::size_t>(parse_u64(key, *v)) : fallback;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key,
                                                  std::vector<std::string> fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  auto items = split_list(*v);
  if (items.empty()) throw ConfigError("config: '" + key + "' is an empty list");
  return items;
}

std::vector<std::size_t> KeyValueConfig::get_size_list(const std::string& key,
                                                       std::vector<std::size_t> fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  for (const auto& item : split_list(*v)) out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
  if (out.empty()) throw ConfigError("config: '" + key + "' is an empty list");
  return out;
}

std::vector<std::uint64_t> KeyValueConfig::get_seed_list(const std::string& key,
                                                         std::vector<std::uint64_t> fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(*v)) {
    // `a..b` expands to the inclusive range.
    if (auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = parse_u64(key, trim(item.substr(0, dots)));
      const auto hi = parse_u64(key, trim(item.substr(dots + 2)));
      if (hi < lo || hi - lo > 1000000) throw ConfigError("config: bad seed range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(parse_u64(key, item));
    }
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' is an empty list");
  return out;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::VarianceBench: return "variance_bench";
    case ExperimentKind::TauMseSweep: return "tau_mse_sweep";
    case ExperimentKind::Optimize: return "optimize";
    case ExperimentKind::Mesh: return "mesh";
  }
  return "unknown";
}

ExperimentSpec experiment_from_config(const KeyValueConfig& cfg) {
  static const std::set<std::string> known = {
      "name", "kind", "objective", "schemes", "d", "delta", "mu", "eta", "batch", "steps",
      "seeds", "tau", "trials", "record_every", "sparsity", "coarse_n", "fine_n", "source",
      "source_value", "boundary", "min_gap"};
  for (const auto& k : cfg.keys())
    if (known.count(k) == 0) throw ConfigError("config: unknown key '" + k + "'");

  ExperimentSpec spec;
  spec.name = cfg.get_string("name", spec.name);
  const auto kind = cfg.get_string("kind", "variance_bench");
  if (kind == "variance_bench") spec.kind = ExperimentKind::VarianceBench;
  else if (kind == "tau_mse_sweep") spec.kind = ExperimentKind::TauMseSweep;
  else if (kind == "optimize") spec.kind = ExperimentKind::Optimize;
  else if (kind == "mesh") spec.kind = ExperimentKind::Mesh;
  else throw ConfigError("config: unknown experiment kind '" + kind + "'");

  const std::string default_objective = [&] {
    switch (spec.kind) {
      case ExperimentKind::VarianceBench: return "affine";
      case ExperimentKind::TauMseSweep: return "quadratic";
      case ExperimentKind::Optimize: return "sphere";
      case ExperimentKind::Mesh: return "mesh";
    }
    return "affine";
  }();
  spec.objective = cfg.get_string("objective", default_objective);
  static const std::set<std::string> objectives = {"affine", "sphere", "quadratic", "product", "mesh"};
  if (objectives.count(spec.objective) == 0)
    throw ConfigError("config: unknown objective '" + spec.objective + "'");
  if ((spec.kind == ExperimentKind::Mesh) != (spec.objective == "mesh"))
    throw ConfigError("config: the mesh objective goes with kind = mesh and only with it");
  if (spec.kind == ExperimentKind::TauMseSweep && spec.objective != "quadratic" && spec.objective != "product")
    throw ConfigError("config: tau_mse_sweep supports the quadratic and product objectives");

  spec.delta = cfg.get_double("delta", spec.delta);
  if (!(spec.delta > 0.0)) throw ConfigError("config: delta must be positive");
  spec.schemes = cfg.get_list("schemes", spec.schemes);
  for (const auto& s : spec.schemes)
    if (!parse_scheme(s, spec.delta)) throw ConfigError("config: unknown scheme '" + s + "'");

  spec.mu = cfg.get_double("mu", spec.mu);
  spec.eta = cfg.get_double("eta", spec.eta);
  spec.batches = cfg.get_size_list("batch", spec.batches);
  spec.steps = cfg.get_size("steps", spec.steps);
  spec.seeds = cfg.get_seed_list("seeds", spec.seeds);
  if (cfg.has("tau")) spec.tau = cfg.get_double("tau", 0.0);
  spec.trials = cfg.get_size("trials", spec.trials);
  spec.record_every = cfg.get_size("record_every", spec.record_every);
  spec.sparsity = cfg.get_string("sparsity", spec.sparsity);
  static const std::set<std::string> sparsities = {"default", "none", "half", "first"};
  if (sparsities.count(spec.sparsity) == 0)
    throw ConfigError("config: unknown sparsity '" + spec.sparsity + "'");

  if (!(spec.mu > 0.0)) throw ConfigError("config: mu must be positive");
  if (!(spec.eta >= 0.0)) throw ConfigError("config: eta must be non-negative");
  if (spec.steps == 0 || spec.trials == 0 || spec.record_every == 0)
    throw ConfigError("config: steps, trials and record_every must be positive");
  if (spec.tau && !(*spec.tau >= 0.0)) throw ConfigError("config: tau must be non-negative");
  for (auto b : spec.batches)
    if (b == 0) throw ConfigError("config: batch sizes must be positive");

  if (spec.kind == ExperimentKind::Mesh) {
    spec.mesh.coarse_n = cfg.get_size("coarse_n", spec.mesh.coarse_n);
    spec.mesh.fine_n = cfg.get_size("fine_n", spec.mesh.fine_n);
    spec.mesh.boundary = cfg.get_double("boundary", spec.mesh.boundary);
    spec.mesh.min_gap = cfg.get_double("min_gap", spec.mesh.min_gap);
    const auto source = cfg.get_string("source", "constant");
    if (source == "constant") {
      const double value = cfg.get_double("source_value", 1.0);
      spec.mesh.source = [value](double, double) { return value; };
    } else if (source == "sine") {
      // Laplacian of sin(pi x) sin(pi y).
      spec.mesh.source = [](double x, double y) {
        const double pi = std::numbers::pi;
        return -2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y);
      };
    } else {
      throw ConfigError("config: unknown source '" + source + "'");
    }
    spec.mesh.source_name = source;
    try {
      spec.mesh.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    spec.d = spec.mesh.dimension();
  } else {
    spec.d = cfg.get_size("d", spec.d);
    if (spec.d == 0) throw ConfigError("config: d must be positive");
    if (spec.objective == "product" && spec.d < 2) throw ConfigError("config: product needs d >= 2");
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  return experiment_from_config(KeyValueConfig::load(path));
}

}  // namespace zo
