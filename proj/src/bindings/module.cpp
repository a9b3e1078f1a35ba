// Python bindings: numpy arrays in, numpy arrays out. Mesh spacing is not
// part of a numpy array, so every grid operation takes an `h` keyword
// (default 2.0, matching the CLI).

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>

#include "unshade/elliptic.hpp"
#include "unshade/grid.hpp"
#include "unshade/imageio.hpp"
#include "unshade/metrics.hpp"
#include "unshade/restore.hpp"
#include "unshade/version.hpp"

namespace py = pybind11;
using namespace unshade;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridField to_field(const Array& arr, double h) {
    if (arr.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D float array");
    }
    const auto rows = static_cast<int>(arr.shape(0));
    const auto cols = static_cast<int>(arr.shape(1));
    std::vector<double> values(arr.data(), arr.data() + arr.size());
    return GridField(rows, cols, h, std::move(values));
}

py::array_t<double> to_array(const GridField& f) {
    py::array_t<double> out({f.rows(), f.cols()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["iterations"] = r.iterations;
    d["final_step_inf_norm"] = r.final_step_inf_norm;
    d["final_residual_l2"] = r.final_residual_l2;
    d["converged"] = r.converged;
    d["contraction_samples"] = r.contraction_samples;
    d["clip_events"] = r.clip_events;
    return d;
}

py::dict stats_dict(const FieldStats& s) {
    py::dict d;
    d["min"] = s.min;
    d["max"] = s.max;
    d["mean"] = s.mean;
    return d;
}

py::dict trace_dict(const RestoreTrace& t) {
    py::list steps;
    for (const RestoreStep& s : t.steps) {
        py::dict d;
        d["step"] = s.step;
        d["solve"] = report_dict(s.solve);
        d["u"] = stats_dict(s.u);
        d["V"] = stats_dict(s.potential);
        d["L"] = stats_dict(s.illumination);
        d["increment_l2"] = s.increment_l2;
        steps.append(d);
    }
    py::dict d;
    d["steps"] = steps;
    d["aborted_step"] = t.aborted_step ? py::object(py::int_(*t.aborted_step)) : py::none();
    d["abort_reason"] = t.abort_reason;
    return d;
}

SolverConfig make_config(std::optional<double> omega, double tol, int max_iter, double u_min,
                         double u_max) {
    SolverConfig cfg;
    cfg.omega = omega;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.u_min = u_min;
    cfg.u_max = u_max;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Uneven-illumination restoration: grid operators, elliptic solvers, metrics";
    m.attr("__version__") = kVersion;
    m.attr("DEFAULT_MESH_SPACING") = kDefaultMeshSpacing;

    // grid operators
    m.def(
        "laplacian",
        [](const Array& f, double h, const std::string& rule) {
            return to_array(laplacian(to_field(f, h), parse_boundary_rule(rule)));
        },
        py::arg("f"), py::arg("h") = kDefaultMeshSpacing, py::arg("rule") = "interior-zero",
        "Five-point Laplacian of a 2-D field");
    m.def(
        "gradient",
        [](const Array& f, double h, const std::string& rule) {
            auto [gx, gy] = gradient(to_field(f, h), parse_boundary_rule(rule));
            return py::make_tuple(to_array(gx), to_array(gy));
        },
        py::arg("f"), py::arg("h") = kDefaultMeshSpacing, py::arg("rule") = "interior-zero",
        "Central-difference gradient (d/dx along columns, d/dy along rows)");
    m.def(
        "divergence",
        [](const Array& px, const Array& py_, double h, const std::string& rule) {
            return to_array(divergence(to_field(px, h), to_field(py_, h),
                                       parse_boundary_rule(rule)));
        },
        py::arg("px"), py::arg("py"), py::arg("h") = kDefaultMeshSpacing,
        py::arg("rule") = "interior-zero");

    // elliptic subproblem
    m.def(
        "solve_direct",
        [](const Array& b, double sigma, double h) {
            return to_array(
                solve_direct(EllipticProblem(to_field(b, h), sigma,
                                             EllipticMode::AnchoredDirichlet),
                             h));
        },
        py::arg("b"), py::arg("sigma"), py::arg("h") = kDefaultMeshSpacing,
        "Dense direct solve of the anchored interior system (the oracle path)");
    m.def(
        "solve_richardson",
        [](const Array& b, double sigma, double h, const std::string& mode,
           std::optional<double> omega, double tol, int max_iter, double u_min, double u_max,
           std::optional<Array> u0, const std::string& boundary) {
            const EllipticProblem problem(to_field(b, h), sigma, parse_elliptic_mode(mode));
            const SolverConfig cfg = make_config(omega, tol, max_iter, u_min, u_max);
            std::optional<GridField> initial;
            if (u0) initial = to_field(*u0, h);
            const RichardsonResult result =
                solve_richardson(problem, h, cfg, initial ? &*initial : nullptr, nullptr,
                                 parse_boundary_rule(boundary));
            return py::make_tuple(to_array(result.u), report_dict(result.report));
        },
        py::arg("b"), py::arg("sigma"), py::arg("h") = kDefaultMeshSpacing,
        py::arg("mode") = "anchored", py::arg("omega") = py::none(), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 500, py::arg("u_min") = 1e-8, py::arg("u_max") = 1e8,
        py::arg("u0") = py::none(), py::arg("boundary") = "interior-zero",
        "Damped Richardson iteration with clipping; returns (u, report)");
    m.def(
        "estimate_lambda_max",
        [](const Array& b, double sigma, double h, int iters) {
            const auto est = estimate_lambda_max(
                EllipticProblem(to_field(b, h), sigma, EllipticMode::AnchoredDirichlet), h,
                iters);
            return py::make_tuple(est.estimate, est.gershgorin_bound);
        },
        py::arg("b"), py::arg("sigma"), py::arg("h") = kDefaultMeshSpacing,
        py::arg("iters") = 50, "Power-iteration estimate and Gershgorin bound");
    m.def(
        "auto_omega",
        [](const Array& b, double sigma, double h) {
            return auto_omega(
                EllipticProblem(to_field(b, h), sigma, EllipticMode::AnchoredDirichlet), h);
        },
        py::arg("b"), py::arg("sigma"), py::arg("h") = kDefaultMeshSpacing);

    // restoration pipeline
    m.def(
        "cost_field",
        [](const Array& l, double h, bool clamp) {
            return to_array(cost_field(to_field(l, h), clamp));
        },
        py::arg("l"), py::arg("h") = kDefaultMeshSpacing, py::arg("clamp") = true);
    m.def(
        "log_potential",
        [](const Array& u, double sigma, double h) {
            return to_array(log_potential(to_field(u, h), sigma));
        },
        py::arg("u"), py::arg("sigma"), py::arg("h") = kDefaultMeshSpacing);
    m.def(
        "momentum",
        [](const Array& v, double h, const std::string& rule) {
            auto [px, py_] = momentum(to_field(v, h), parse_boundary_rule(rule));
            return py::make_tuple(to_array(px), to_array(py_));
        },
        py::arg("v"), py::arg("h") = kDefaultMeshSpacing, py::arg("rule") = "interior-zero");
    m.def(
        "update_illumination",
        [](const Array& l, const Array& px, const Array& py_, double dt, double h,
           const std::string& rule, const std::string& boundary, bool clamp) {
            return to_array(update_illumination(to_field(l, h), to_field(px, h),
                                                to_field(py_, h), dt, parse_update_rule(rule),
                                                parse_boundary_rule(boundary), clamp));
        },
        py::arg("l"), py::arg("px"), py::arg("py"), py::arg("dt"),
        py::arg("h") = kDefaultMeshSpacing, py::arg("rule") = "divergence",
        py::arg("boundary") = "interior-zero", py::arg("clamp") = true);
    m.def(
        "restore",
        [](const Array& l0, double sigma, double dt, int steps, double h,
           const std::string& mode, const std::string& update, const std::string& boundary,
           bool clamp, bool warm_start, std::optional<double> omega, double tol, int max_iter,
           double u_min, double u_max) {
            RestoreParams params;
            params.sigma = sigma;
            params.dt = dt;
            params.global_steps = steps;
            params.solver = make_config(omega, tol, max_iter, u_min, u_max);
            params.mode = parse_elliptic_mode(mode);
            params.update_rule = parse_update_rule(update);
            params.boundary = parse_boundary_rule(boundary);
            params.clamp_illumination = clamp;
            params.warm_start = warm_start;
            const RestoreResult result = restore(to_field(l0, h), params);
            return py::make_tuple(to_array(result.illumination), trace_dict(result.trace));
        },
        py::arg("l0"), py::arg("sigma") = 1e-6, py::arg("dt") = 1e-4, py::arg("steps") = 20,
        py::arg("h") = kDefaultMeshSpacing, py::arg("mode") = "anchored",
        py::arg("update") = "divergence", py::arg("boundary") = "interior-zero",
        py::arg("clamp") = true, py::arg("warm_start") = false, py::arg("omega") = py::none(),
        py::arg("tol") = 1e-8, py::arg("max_iter") = 500, py::arg("u_min") = 1e-8,
        py::arg("u_max") = 1e8, "Run the full restoration loop; returns (L, trace)");

    // metrics
    m.def(
        "mse", [](const Array& a, const Array& b) { return mse(to_field(a, 1.0), to_field(b, 1.0)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "psnr",
        [](const Array& a, const Array& b, double data_range) {
            return psnr(to_field(a, 1.0), to_field(b, 1.0), data_range);
        },
        py::arg("a"), py::arg("b"), py::arg("data_range") = 255.0);
    m.def(
        "ssim",
        [](const Array& a, const Array& b, double data_range, const std::string& window) {
            return ssim(to_field(a, 1.0), to_field(b, 1.0), data_range,
                        parse_ssim_window(window));
        },
        py::arg("a"), py::arg("b"), py::arg("data_range") = 255.0,
        py::arg("window") = "gauss11");
    m.def(
        "compare",
        [](const Array& a, const Array& b, double data_range, const std::string& window) {
            const MetricReport r =
                compare(to_field(a, 1.0), to_field(b, 1.0), data_range, parse_ssim_window(window));
            py::dict d;
            d["psnr_db"] = r.psnr_db;
            d["ssim"] = r.ssim;
            d["mse"] = r.mse;
            d["data_range"] = r.data_range;
            d["ssim_window"] = name(r.window);
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("data_range") = 255.0,
        py::arg("window") = "gauss11");

    // image io and synthetic shading
    m.def(
        "load_luminance",
        [](const std::string& path, double h) { return to_array(load_luminance(path, h)); },
        py::arg("path"), py::arg("h") = kDefaultMeshSpacing,
        "Load a PGM/PNG image as a [0,1] luminance array");
    m.def(
        "save_gray",
        [](const Array& field, const std::string& path) {
            save_gray(to_field(field, kDefaultMeshSpacing), path);
        },
        py::arg("field"), py::arg("path"), "Write an 8-bit grayscale PGM or PNG");
    m.def(
        "apply_shading",
        [](const Array& clean, const std::string& kind, double strength, std::uint64_t seed,
           double h) {
            const ShadingSpec spec{parse_shading_kind(kind), strength, seed};
            return to_array(apply_shading(to_field(clean, h), spec));
        },
        py::arg("clean"), py::arg("kind") = "ramp", py::arg("strength") = 0.5,
        py::arg("seed") = 0, py::arg("h") = kDefaultMeshSpacing);
    m.def(
        "shading_mask",
        [](int rows, int cols, const std::string& kind, double strength, std::uint64_t seed) {
            const ShadingSpec spec{parse_shading_kind(kind), strength, seed};
            return to_array(shading_mask(rows, cols, kDefaultMeshSpacing, spec));
        },
        py::arg("rows"), py::arg("cols"), py::arg("kind") = "ramp", py::arg("strength") = 0.5,
        py::arg("seed") = 0);
}
