#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "zo/analysis.hpp"
#include "zo/config.hpp"
#include "zo/errors.hpp"
#include "zo/estimator.hpp"
#include "zo/experiments.hpp"
#include "zo/mesh.hpp"
#include "zo/objectives.hpp"
#include "zo/optimizer.hpp"
#include "zo/perturb.hpp"
#include "zo/poisson.hpp"
#include "zo/rng.hpp"
#include "zo/verify.hpp"

namespace py = pybind11;
using namespace zo;

namespace {

// Objectives written in Python run under the GIL, so they are never marked pure.
Objective python_objective(py::function f, std::size_t dim, std::optional<py::function> grad,
                           std::optional<double> L, std::string name) {
  Objective obj;
  obj.name = std::move(name);
  obj.dim = dim;
  obj.pure = false;
  obj.smoothness_L = L;
  obj.eval = [f](const Vector& x) { return f(x).cast<double>(); };
  if (grad) obj.grad_oracle = [g = *grad](const Vector& x) { return g(x).cast<Vector>(); };
  return obj;
}

py::dict profile_dict(const MomentProfile& p) {
  py::dict d;
  d["fourth_moment"] = p.fourth_moment ? py::cast(*p.fourth_moment) : py::none();
  d["rho"] = p.rho ? py::cast(*p.rho) : py::none();
  if (p.empirical_skew_vector.size() > 0) d["skew"] = p.empirical_skew_vector;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeroth-order gradient estimation with directionally aligned perturbations";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DegeneratePlane>(m, "DegeneratePlane", PyExc_ValueError);
  py::register_exception<InvalidMesh>(m, "InvalidMesh", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_property_readonly("seed", &RngStream::seed)
      .def_property_readonly("counter", &RngStream::counter)
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", py::overload_cast<>(&RngStream::uniform))
      .def("normal", &RngStream::normal)
      .def("below", &RngStream::below, py::arg("n"))
      .def("copy", [](const RngStream& r) { return r; })
      .def("__eq__", [](const RngStream& a, const RngStream& b) { return a == b; })
      .def("__repr__", [](const RngStream& r) {
        return "RngStream(seed=" + std::to_string(r.seed()) + ", counter=" + std::to_string(r.counter()) + ")";
      });
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));

  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("GAUSSIAN", SchemeKind::Gaussian)
      .value("UNIFORM_SPHERE", SchemeKind::UniformSphere)
      .value("RADEMACHER", SchemeKind::Rademacher)
      .value("RANDOM_COORDINATE", SchemeKind::RandomCoordinate)
      .value("DAP", SchemeKind::DAP);
  py::enum_<AnchorPolicy>(m, "AnchorPolicy")
      .value("EXACT_GRADIENT", AnchorPolicy::ExactGradient)
      .value("ESTIMATED_GRADIENT", AnchorPolicy::EstimatedGradient);

  py::class_<PerturbationScheme>(m, "PerturbationScheme")
      .def(py::init([](SchemeKind k, double delta, AnchorPolicy p) {
             PerturbationScheme s{k, delta, p};
             s.validate();
             return s;
           }),
           py::arg("kind"), py::arg("delta") = 1.0, py::arg("anchor_policy") = AnchorPolicy::ExactGradient)
      .def(py::init([](const std::string& name, double delta) {
             auto s = parse_scheme(name, delta);
             if (!s) throw InvalidArgument("unknown scheme '" + name + "'");
             s->validate();
             return *s;
           }),
           py::arg("name"), py::arg("delta") = 1.0)
      .def_readwrite("kind", &PerturbationScheme::kind)
      .def_readwrite("delta", &PerturbationScheme::delta)
      .def_readwrite("anchor_policy", &PerturbationScheme::anchor_policy)
      .def_property_readonly("name", &PerturbationScheme::name)
      .def("__repr__", [](const PerturbationScheme& s) {
        std::ostringstream os;
        os << "PerturbationScheme('" << s.name() << "', delta=" << s.delta << ")";
        return os.str();
      });

  m.def("sample_gaussian", &sample_gaussian, py::arg("d"), py::arg("delta"), py::arg("rng"));
  m.def("sample_uniform_sphere", &sample_uniform_sphere, py::arg("d"), py::arg("delta"), py::arg("rng"));
  m.def("sample_rademacher", &sample_rademacher, py::arg("d"), py::arg("delta"), py::arg("rng"));
  m.def("sample_coordinate", &sample_coordinate, py::arg("d"), py::arg("delta"), py::arg("rng"));
  m.def("sample_dap", &sample_dap, py::arg("anchor"), py::arg("d"), py::arg("delta"), py::arg("rng"));
  m.def("project_onto_hyperplane", &project_onto_hyperplane, py::arg("v"), py::arg("u"), py::arg("c"));
  m.def(
      "sample",
      [](const PerturbationScheme& s, std::size_t d, RngStream& rng, std::optional<Vector> anchor) {
        return sample(s, d, rng, anchor ? &*anchor : nullptr);
      },
      py::arg("scheme"), py::arg("d"), py::arg("rng"), py::arg("anchor") = py::none());
  m.def(
      "moment_profile", [](const PerturbationScheme& s, std::size_t d) { return profile_dict(moment_profile(s, d)); },
      py::arg("scheme"), py::arg("d"));
  m.def(
      "estimate_moments",
      [](const PerturbationScheme& s, std::size_t d, std::size_t n, RngStream& rng, std::optional<Vector> anchor) {
        const auto e = estimate_moments(s, d, n, rng, anchor ? &*anchor : nullptr);
        py::dict out;
        out["n"] = e.n;
        out["fourth_moment"] = e.fourth_moment;
        out["fourth_moment_se"] = e.fourth_moment_se;
        out["covariance"] = e.covariance;
        out["skew"] = e.skew;
        out["max_norm_sq_rel_error"] = e.max_norm_sq_rel_error;
        return out;
      },
      py::arg("scheme"), py::arg("d"), py::arg("n"), py::arg("rng"), py::arg("anchor") = py::none());

  py::class_<Objective>(m, "Objective")
      .def(py::init(&python_objective), py::arg("f"), py::arg("dim"), py::arg("grad") = py::none(),
           py::arg("L") = py::none(), py::arg("name") = "python")
      .def_readonly("name", &Objective::name)
      .def_readonly("dim", &Objective::dim)
      .def_readonly("smoothness_L", &Objective::smoothness_L)
      .def_property_readonly("has_gradient", &Objective::has_gradient)
      .def("__call__", &Objective::operator(), py::arg("x"))
      .def("gradient", &Objective::gradient, py::arg("x"));

  m.def("quadratic", py::overload_cast<Matrix>(&quadratic), py::arg("A"));
  m.def(
      "seeded_quadratic", [](std::uint64_t seed, std::size_t d) { return quadratic(QuadraticSpec{seed, d, {}}); },
      py::arg("seed"), py::arg("d"));
  m.def(
      "quadratic_matrix", [](std::uint64_t seed, std::size_t d) { return quadratic_matrix(QuadraticSpec{seed, d, {}}); },
      py::arg("seed"), py::arg("d"));
  m.def("product", &product, py::arg("d"));
  m.def("affine", &affine, py::arg("g"), py::arg("c") = 0.0);
  m.def("squared_norm", &squared_norm, py::arg("d"));
  m.def("fd_gradient", &fd_gradient, py::arg("objective"), py::arg("x"), py::arg("h") = 1e-5);
  m.def("sparse_query_point", &sparse_query_point, py::arg("d"), py::arg("zeros"), py::arg("rng"));
  m.def("half_mask", &half_mask, py::arg("d"));

  m.def(
      "mesh_objective",
      [](std::size_t coarse_n, std::size_t fine_n, double source, double boundary, double min_gap) {
        MeshProblem p;
        p.coarse_n = coarse_n;
        p.fine_n = fine_n;
        p.source = [source](double, double) { return source; };
        p.boundary = boundary;
        p.min_gap = min_gap;
        py::dict out;
        out["objective"] = mesh_objective(p);
        out["start"] = uniform_mesh_point(p);
        return out;
      },
      py::arg("coarse_n") = 10, py::arg("fine_n") = 20, py::arg("source") = 1.0, py::arg("boundary") = 0.0,
      py::arg("min_gap") = 1e-3);
  m.def(
      "poisson_solve",
      [](const std::vector<double>& gx, const std::vector<double>& gy, const SourceFn& source, double boundary) {
        return poisson_solve(gx, gy, source, boundary).values;
      },
      py::arg("grid_x"), py::arg("grid_y"), py::arg("source"), py::arg("boundary") = 0.0,
      "Nodal solution of Laplace(phi) = source on [0, 1]^2; entry (i, j) sits at (grid_x[i], grid_y[j]).");
  m.def("uniform_grid", &uniform_grid, py::arg("n"));

  py::class_<GradientEstimate>(m, "GradientEstimate")
      .def_readonly("gradient", &GradientEstimate::gradient)
      .def_readonly("mu", &GradientEstimate::mu)
      .def_readonly("batch", &GradientEstimate::batch)
      .def_readonly("evals", &GradientEstimate::evals)
      .def_readonly("scheme_name", &GradientEstimate::scheme_name)
      .def_readonly("seed", &GradientEstimate::seed);

  m.def("two_point", &two_point, py::arg("objective"), py::arg("x"), py::arg("v"), py::arg("mu"));
  m.def(
      "batched",
      [](const Objective& obj, const Vector& x, const PerturbationScheme& s, std::size_t b, double mu, RngStream& rng,
         std::optional<Vector> anchor) { return batched(obj, x, s, b, mu, rng, anchor ? &*anchor : nullptr); },
      py::arg("objective"), py::arg("x"), py::arg("scheme"), py::arg("b"), py::arg("mu"), py::arg("rng"),
      py::arg("anchor") = py::none());
  m.def("dap_pipeline", &dap_pipeline, py::arg("objective"), py::arg("x"), py::arg("b"), py::arg("mu"),
        py::arg("delta"), py::arg("rng"));
  m.def("estimate", &estimate, py::arg("objective"), py::arg("x"), py::arg("scheme"), py::arg("b"), py::arg("mu"),
        py::arg("rng"));

  py::class_<SgdConfig>(m, "SgdConfig")
      .def(py::init([](double eta, double mu, std::size_t steps, std::size_t batch, const PerturbationScheme& s,
                       std::uint64_t seed, std::size_t record_every) {
             SgdConfig c{eta, mu, steps, batch, s, seed, record_every};
             c.validate();
             return c;
           }),
           py::arg("eta"), py::arg("mu"), py::arg("steps"), py::arg("batch"), py::arg("scheme"), py::arg("seed") = 0,
           py::arg("record_every") = 1)
      .def_readwrite("eta", &SgdConfig::eta)
      .def_readwrite("mu", &SgdConfig::mu)
      .def_readwrite("steps", &SgdConfig::steps)
      .def_readwrite("batch", &SgdConfig::batch)
      .def_readwrite("scheme", &SgdConfig::scheme)
      .def_readwrite("seed", &SgdConfig::seed)
      .def_readwrite("record_every", &SgdConfig::record_every);

  py::class_<SgdTrace>(m, "SgdTrace")
      .def_property_readonly("steps",
                             [](const SgdTrace& t) {
                               std::vector<std::size_t> s;
                               for (const auto& r : t.records) s.push_back(r.step);
                               return s;
                             })
      .def_property_readonly("values",
                             [](const SgdTrace& t) {
                               std::vector<double> v;
                               for (const auto& r : t.records) v.push_back(r.value);
                               return v;
                             })
      .def_property_readonly("grad_norms",
                             [](const SgdTrace& t) {
                               std::vector<std::optional<double>> v;
                               for (const auto& r : t.records) v.push_back(r.grad_norm);
                               return v;
                             })
      .def_readonly("final_point", &SgdTrace::final_point)
      .def_readonly("min_grad_norm_sq", &SgdTrace::min_grad_norm_sq)
      .def_readonly("evals", &SgdTrace::evals);

  m.def("zo_sgd", &zo_sgd, py::arg("objective"), py::arg("x1"), py::arg("config"));

  py::class_<StepSizeInputs>(m, "StepSizeInputs")
      .def(py::init([](double L, std::optional<double> c, double delta, std::size_t d, double rho, std::size_t T,
                       std::optional<double> b2) { return StepSizeInputs{L, c, delta, d, rho, T, b2}; }),
           py::arg("L") = 1.0, py::arg("c") = py::none(), py::arg("delta") = 1.0, py::arg("d") = 1,
           py::arg("rho") = 0.0, py::arg("T") = 1, py::arg("f_gap_b2") = py::none())
      .def_readwrite("L", &StepSizeInputs::L)
      .def_readwrite("c", &StepSizeInputs::c)
      .def_readwrite("delta", &StepSizeInputs::delta)
      .def_readwrite("d", &StepSizeInputs::d)
      .def_readwrite("rho", &StepSizeInputs::rho)
      .def_readwrite("T", &StepSizeInputs::T)
      .def_readwrite("f_gap_b2", &StepSizeInputs::f_gap_b2);
  m.def("max_step_nonconvex", &max_step_nonconvex, py::arg("inputs"));
  m.def("max_step_strongly_convex", &max_step_strongly_convex, py::arg("inputs"));
  m.def("strongly_convex_floor", &strongly_convex_floor, py::arg("inputs"), py::arg("eta"), py::arg("mu"),
        py::arg("fourth_moment"));

  py::enum_<ScheduleMode>(m, "ScheduleMode")
      .value("NONCONVEX", ScheduleMode::Nonconvex)
      .value("STRONGLY_CONVEX", ScheduleMode::StronglyConvex);
  m.def(
      "corollary_schedule",
      [](double eps, std::size_t d, ScheduleMode mode, double k_eta, double k_mu, double k_T) {
        const auto s = corollary_schedule(eps, d, mode, {k_eta, k_mu, k_T});
        return py::make_tuple(s.eta, s.mu, s.T);
      },
      py::arg("epsilon"), py::arg("d"), py::arg("mode"), py::arg("k_eta") = 1.0, py::arg("k_mu") = 1.0,
      py::arg("k_T") = 1.0, "Returns (eta, mu, T).");

  m.def("variance_lower_bound", &variance_lower_bound, py::arg("a"), py::arg("delta"), py::arg("d"));
  m.def("variance_upper_bound", &variance_upper_bound, py::arg("a"), py::arg("delta"), py::arg("d"), py::arg("rho"));
  m.def("min_variance_mse", &min_variance_mse, py::arg("grad_norm_sq"), py::arg("delta"), py::arg("d"));
  m.def("mse_upper_bound", &mse_upper_bound, py::arg("a"), py::arg("delta"), py::arg("d"), py::arg("rho"));
  m.def("mse", &mse, py::arg("est"), py::arg("truth"));
  m.def("tau_mse", py::overload_cast<const Vector&, const Vector&, double>(&tau_mse), py::arg("est"),
        py::arg("truth"), py::arg("tau"));
  m.def(
      "empirical_estimator_mse",
      [](const Objective& obj, const Vector& x, const PerturbationScheme& s, double mu, std::size_t n,
         std::optional<double> tau, RngStream& rng) {
        const auto r = empirical_estimator_mse(obj, x, s, mu, n, tau, rng);
        py::dict out;
        out["n"] = r.n;
        out["mean"] = r.mean;
        out["se"] = r.se;
        out["tau_mean"] = r.tau_mean ? py::cast(*r.tau_mean) : py::none();
        out["tau_se"] = r.tau_se ? py::cast(*r.tau_se) : py::none();
        return out;
      },
      py::arg("objective"), py::arg("x"), py::arg("scheme"), py::arg("mu"), py::arg("n"),
      py::arg("tau") = py::none(), py::arg("rng"));

  m.def(
      "run_config",
      [](const std::string& text) {
        const auto spec = experiment_from_config(KeyValueConfig::parse(text));
        ExperimentReport report;
        {
          // Built-in objectives only: no Python callbacks run inside the workers.
          py::gil_scoped_release release;
          report = run_experiment(spec);
        }
        return report.to_csv();
      },
      py::arg("text"), "Runs a key = value experiment config and returns the CSV report.");
  m.def(
      "verify",
      [](std::uint64_t seed) {
        VerifyOptions o;
        o.seed = seed;
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_verification(o);
        }
        std::vector<py::tuple> out;
        for (const auto& r : results) out.push_back(py::make_tuple(r.name, r.passed, r.detail));
        return out;
      },
      py::arg("seed") = VerifyOptions{}.seed, "List of (name, passed, detail) for the Monte-Carlo checks.");
}
