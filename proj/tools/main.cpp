// unshade: command line front end for the illumination restoration library.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "unshade/imageio.hpp"
#include "unshade/json_io.hpp"
#include "unshade/metrics.hpp"
#include "unshade/restore.hpp"
#include "unshade/version.hpp"

namespace fs = std::filesystem;
using unshade::OrderedJson;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_manifest(const fs::path& path, OrderedJson manifest, double seconds) {
    manifest["tool"] = "unshade";
    manifest["version"] = unshade::kVersion;
    manifest["duration_seconds"] = seconds;
    write_text(path, manifest.dump(2) + "\n");
}

// "auto" or a positive real.
std::optional<double> parse_omega(const std::string& text) {
    if (text == "auto") return std::nullopt;
    return std::stod(text);
}

const CLI::Validator OmegaValidator(
    [](std::string& text) -> std::string {
        if (text == "auto") return {};
        try {
            const double v = std::stod(text);
            if (!(v > 0.0) || !std::isfinite(v)) return "omega must be positive (or 'auto')";
        } catch (const std::exception&) {
            return "omega must be a number or 'auto'";
        }
        return {};
    },
    "OMEGA", "omega");

std::string sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct SolverFlags {
    std::string omega = "auto";
    double tol = 1e-8;
    int max_iter = 500;
    double u_min = 1e-8;
    double u_max = 1e8;

    void attach(CLI::App* cmd) {
        cmd->add_option("--omega", omega, "Relaxation step (positive real or 'auto')")
            ->capture_default_str()
            ->check(OmegaValidator);
        cmd->add_option("--tol", tol, "Stopping tolerance on the l-inf iterate step")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", max_iter, "Iteration cap per solve")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--u-min", u_min, "Positivity clip floor")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--u-max", u_max, "Clip ceiling")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }

    unshade::SolverConfig config() const {
        unshade::SolverConfig cfg;
        cfg.omega = parse_omega(omega);
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.u_min = u_min;
        cfg.u_max = u_max;
        return cfg;
    }

    OrderedJson json() const {
        OrderedJson j;
        j["omega"] = omega;
        j["tol"] = tol;
        j["max_iter"] = max_iter;
        j["u_min"] = u_min;
        j["u_max"] = u_max;
        return j;
    }
};

// ---------------------------------------------------------------- restore --

struct RestoreArgs {
    std::string input, output;
    double sigma = 1e-6;
    double dt = 1e-4;
    int steps = 20;
    double h = unshade::kDefaultMeshSpacing;
    SolverFlags solver;
    std::string mode = "anchored";
    std::string update = "divergence";
    std::string boundary = "interior-zero";
    bool no_clamp = false;
    bool warm_start = false;
    std::string trace_path, trace_csv_path, manifest_path;
};

int run_restore(const RestoreArgs& args) {
    Timer timer;
    unshade::RestoreParams params;
    params.sigma = args.sigma;
    params.dt = args.dt;
    params.global_steps = args.steps;
    params.solver = args.solver.config();
    params.mode = unshade::parse_elliptic_mode(args.mode);
    params.update_rule = unshade::parse_update_rule(args.update);
    params.boundary = unshade::parse_boundary_rule(args.boundary);
    params.clamp_illumination = !args.no_clamp;
    params.warm_start = args.warm_start;

    const unshade::GridField L0 = unshade::load_luminance(args.input, args.h);
    const unshade::RestoreResult result = unshade::restore(L0, params);

    unshade::save_gray(result.illumination, args.output);
    const fs::path trace_path =
        args.trace_path.empty() ? fs::path(args.output + ".trace.jsonl") : fs::path(args.trace_path);
    write_text(trace_path, unshade::trace_jsonl(result.trace));
    if (!args.trace_csv_path.empty()) {
        write_text(args.trace_csv_path, unshade::trace_csv(result.trace));
    }

    OrderedJson manifest;
    manifest["command"] = "restore";
    manifest["input"] = args.input;
    manifest["output"] = args.output;
    manifest["trace"] = trace_path.string();
    if (!args.trace_csv_path.empty()) manifest["trace_csv"] = args.trace_csv_path;
    manifest["params"] = {{"sigma", args.sigma},     {"dt", args.dt},
                          {"steps", args.steps},     {"h", args.h},
                          {"mode", args.mode},       {"update", args.update},
                          {"boundary", args.boundary}, {"clamp", !args.no_clamp},
                          {"warm_start", args.warm_start}};
    manifest["solver"] = args.solver.json();
    const fs::path manifest_path = args.manifest_path.empty()
                                       ? fs::path(args.output + ".manifest.json")
                                       : fs::path(args.manifest_path);
    write_manifest(manifest_path, std::move(manifest), timer.seconds());

    if (result.trace.aborted_step) {
        std::cerr << "unshade restore: aborted at " << result.trace.abort_reason << "\n";
        return 1;
    }
    std::cout << "restored " << args.input << " -> " << args.output << " ("
              << result.trace.steps.size() << " steps)\n";
    return 0;
}

// ------------------------------------------------------------------ solve --

struct SolveArgs {
    std::string input, output;
    double sigma = 1e-6;
    double h = unshade::kDefaultMeshSpacing;
    SolverFlags solver;
    std::string mode = "anchored";
    std::string boundary = "interior-zero";
    bool oracle = false;
    std::string report_path, manifest_path;
};

int run_solve(const SolveArgs& args) {
    Timer timer;
    const unshade::GridField L = unshade::load_luminance(args.input, args.h);
    const unshade::GridField b = unshade::cost_field(L);
    const unshade::EllipticProblem problem(b, args.sigma, unshade::parse_elliptic_mode(args.mode));
    const unshade::SolverConfig cfg = args.solver.config();

    const auto [u, report] = unshade::solve_richardson(
        problem, args.h, cfg, nullptr, nullptr, unshade::parse_boundary_rule(args.boundary));
    unshade::save_gray(u, args.output);

    OrderedJson report_json = unshade::solve_report_json(report);
    report_json["mode"] = args.mode;
    report_json["omega_used"] =
        cfg.omega ? *cfg.omega : unshade::auto_omega(problem, args.h);

    int exit_code = 0;
    if (args.oracle) {
        try {
            const unshade::GridField reference = unshade::solve_direct(problem, args.h);
            double gap = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k) {
                gap = std::max(gap, std::abs(u.values()[k] - reference.values()[k]));
            }
            report_json["oracle_gap_inf"] = gap;
            std::cout << "oracle gap (l-inf): " << sig6(gap) << "\n";
        } catch (const std::invalid_argument& e) {
            std::cerr << "unshade solve: oracle unavailable: " << e.what() << "\n";
            exit_code = 2;
        }
    }

    const fs::path report_path = args.report_path.empty()
                                     ? fs::path(args.output + ".report.json")
                                     : fs::path(args.report_path);
    write_text(report_path, report_json.dump(2) + "\n");

    OrderedJson manifest;
    manifest["command"] = "solve";
    manifest["input"] = args.input;
    manifest["output"] = args.output;
    manifest["report"] = report_path.string();
    manifest["params"] = {{"sigma", args.sigma},
                          {"h", args.h},
                          {"mode", args.mode},
                          {"boundary", args.boundary},
                          {"oracle", args.oracle}};
    manifest["solver"] = args.solver.json();
    const fs::path manifest_path = args.manifest_path.empty()
                                       ? fs::path(args.output + ".manifest.json")
                                       : fs::path(args.manifest_path);
    write_manifest(manifest_path, std::move(manifest), timer.seconds());

    std::cout << (report.converged ? "converged" : "stopped") << " after " << report.iterations
              << " iterations, final step " << sig6(report.final_step_inf_norm) << "\n";
    return exit_code;
}

// ---------------------------------------------------------------- metrics --

struct MetricsArgs {
    std::string image_a, image_b;
    std::string window = "gauss11";
    std::string json_path;
};

int run_metrics(const MetricsArgs& args) {
    Timer timer;
    // Metrics run on the 8-bit scale so the printed numbers match the
    // conventional 0..255 convention.
    unshade::GridField a = unshade::load_luminance(args.image_a);
    unshade::GridField b = unshade::load_luminance(args.image_b);
    for (double& v : a.values()) v *= 255.0;
    for (double& v : b.values()) v *= 255.0;

    const unshade::MetricReport report =
        unshade::compare(a, b, 255.0, unshade::parse_ssim_window(args.window));
    std::cout << unshade::human_readable(report);

    if (!args.json_path.empty()) {
        write_text(args.json_path, unshade::metric_report_json(report).dump(2) + "\n");
        OrderedJson manifest;
        manifest["command"] = "metrics";
        manifest["input_a"] = args.image_a;
        manifest["input_b"] = args.image_b;
        manifest["output"] = args.json_path;
        manifest["params"] = {{"ssim_window", args.window}, {"data_range", 255.0}};
        write_manifest(args.json_path + ".manifest.json", std::move(manifest), timer.seconds());
    }
    return 0;
}

// ------------------------------------------------------------------ synth --

struct SynthArgs {
    std::string input, output;
    std::string kind = "ramp";
    double strength = 0.5;
    std::uint64_t seed = 0;
    double h = unshade::kDefaultMeshSpacing;
    std::string manifest_path;
};

int run_synth(const SynthArgs& args) {
    Timer timer;
    const unshade::GridField clean = unshade::load_luminance(args.input, args.h);
    const unshade::ShadingSpec spec{unshade::parse_shading_kind(args.kind), args.strength,
                                    args.seed};
    unshade::save_gray(unshade::apply_shading(clean, spec), args.output);

    OrderedJson manifest;
    manifest["command"] = "synth";
    manifest["input"] = args.input;
    manifest["output"] = args.output;
    manifest["params"] = {{"shading", args.kind},
                          {"strength", args.strength},
                          {"seed", args.seed},
                          {"h", args.h}};
    const fs::path manifest_path = args.manifest_path.empty()
                                       ? fs::path(args.output + ".manifest.json")
                                       : fs::path(args.manifest_path);
    write_manifest(manifest_path, std::move(manifest), timer.seconds());
    std::cout << "shaded " << args.input << " -> " << args.output << " (" << args.kind
              << ", strength " << args.strength << ")\n";
    return 0;
}

// --------------------------------------------------------------- spectrum --

struct SpectrumArgs {
    std::string input;
    double sigma = 1e-6;
    double h = unshade::kDefaultMeshSpacing;
    int iters = 50;
    std::string json_path;
};

int run_spectrum(const SpectrumArgs& args) {
    Timer timer;
    const unshade::GridField L = unshade::load_luminance(args.input, args.h);
    const unshade::GridField b = unshade::cost_field(L);
    const unshade::EllipticProblem problem(b, args.sigma, unshade::EllipticMode::AnchoredDirichlet);

    const auto est = unshade::estimate_lambda_max(problem, args.h, args.iters);
    const double omega = unshade::auto_omega(problem, args.h);
    std::cout << "gershgorin bound: " << sig6(est.gershgorin_bound) << "\n"
              << "lambda max estimate (" << args.iters << " power iterations): "
              << sig6(est.estimate) << "\n"
              << "auto omega: " << sig6(omega) << "\n";

    if (!args.json_path.empty()) {
        OrderedJson j;
        j["gershgorin_bound"] = est.gershgorin_bound;
        j["lambda_max_estimate"] = est.estimate;
        j["power_iters"] = args.iters;
        j["auto_omega"] = omega;
        write_text(args.json_path, j.dump(2) + "\n");
        OrderedJson manifest;
        manifest["command"] = "spectrum";
        manifest["input"] = args.input;
        manifest["output"] = args.json_path;
        manifest["params"] = {{"sigma", args.sigma}, {"h", args.h}, {"iters", args.iters}};
        write_manifest(args.json_path + ".manifest.json", std::move(manifest), timer.seconds());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uneven-illumination restoration via an elliptic reaction-diffusion scheme"};
    app.set_version_flag("--version", unshade::kVersion);
    app.require_subcommand(1);
    // --h is a real option (mesh spacing), so help is long-form only.
    app.set_help_flag("--help", "Print help");

    RestoreArgs restore_args;
    CLI::App* restore = app.add_subcommand("restore", "Restore an unevenly lit image");
    restore->set_help_flag("--help", "Print help");
    restore->add_option("input", restore_args.input, "Input image (PGM or PNG)")->required();
    restore->add_option("output", restore_args.output, "Restored image path")->required();
    restore->add_option("--sigma", restore_args.sigma, "Regularization parameter")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    restore->add_option("--dt", restore_args.dt, "Explicit update step")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    restore->add_option("--steps", restore_args.steps, "Global iterations T")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    restore->add_option("--h", restore_args.h, "Mesh spacing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    restore_args.solver.attach(restore);
    restore->add_option("--mode", restore_args.mode, "Elliptic mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"anchored", "neumann"}));
    restore->add_option("--update", restore_args.update, "Illumination update rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"divergence", "sum"}));
    restore->add_option("--boundary", restore_args.boundary, "Stencil boundary rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"interior-zero", "reflect"}));
    restore->add_flag("--no-clamp", restore_args.no_clamp, "Do not clamp L into [0,1] per step");
    restore->add_flag("--warm-start", restore_args.warm_start,
                      "Reuse the previous step's auxiliary field");
    restore->add_option("--trace", restore_args.trace_path, "Trace path (JSON lines)");
    restore->add_option("--trace-csv", restore_args.trace_csv_path, "Trace path (CSV)");
    restore->add_option("--manifest", restore_args.manifest_path, "Manifest path");

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve one elliptic subproblem");
    solve->set_help_flag("--help", "Print help");
    solve->add_option("input", solve_args.input, "Input image defining b = L^2")->required();
    solve->add_option("output", solve_args.output, "Output image for u")->required();
    solve->add_option("--sigma", solve_args.sigma, "Regularization parameter")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    solve->add_option("--h", solve_args.h, "Mesh spacing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    solve_args.solver.attach(solve);
    solve->add_option("--mode", solve_args.mode, "Elliptic mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"anchored", "neumann"}));
    solve->add_option("--boundary", solve_args.boundary, "Laplacian rule in neumann mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"interior-zero", "reflect"}));
    solve->add_flag("--oracle", solve_args.oracle,
                    "Also run the dense direct solve and print the l-inf gap");
    solve->add_option("--report", solve_args.report_path, "Solve report path (JSON)");
    solve->add_option("--manifest", solve_args.manifest_path, "Manifest path");

    MetricsArgs metrics_args;
    CLI::App* metrics = app.add_subcommand("metrics", "PSNR / SSIM / MSE between two images");
    metrics->set_help_flag("--help", "Print help");
    metrics->add_option("a", metrics_args.image_a, "First image")->required();
    metrics->add_option("b", metrics_args.image_b, "Second image")->required();
    metrics->add_option("--ssim-window", metrics_args.window, "SSIM window")
        ->capture_default_str()
        ->check(CLI::IsMember({"gauss11", "uniform7"}));
    metrics->add_option("--json", metrics_args.json_path, "Also write a JSON report");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Apply synthetic shading to a clean image");
    synth->set_help_flag("--help", "Print help");
    synth->add_option("input", synth_args.input, "Clean input image")->required();
    synth->add_option("output", synth_args.output, "Shaded output image")->required();
    synth->add_option("--shading", synth_args.kind, "Shading model")
        ->capture_default_str()
        ->check(CLI::IsMember({"ramp", "radial", "vignette"}));
    synth->add_option("--strength", synth_args.strength, "Shading strength in [0,1)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--seed", synth_args.seed, "Recorded jitter seed")->capture_default_str();
    synth->add_option("--h", synth_args.h, "Mesh spacing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    synth->add_option("--manifest", synth_args.manifest_path, "Manifest path");

    SpectrumArgs spectrum_args;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Spectral diagnostics for an image-derived problem");
    spectrum->set_help_flag("--help", "Print help");
    spectrum->add_option("input", spectrum_args.input, "Input image defining b = L^2")->required();
    spectrum->add_option("--sigma", spectrum_args.sigma, "Regularization parameter")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    spectrum->add_option("--h", spectrum_args.h, "Mesh spacing")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    spectrum->add_option("--iters", spectrum_args.iters, "Power iteration count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    spectrum->add_option("--json", spectrum_args.json_path, "Also write a JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (restore->parsed()) return run_restore(restore_args);
        if (solve->parsed()) return run_solve(solve_args);
        if (metrics->parsed()) return run_metrics(metrics_args);
        if (synth->parsed()) return run_synth(synth_args);
        if (spectrum->parsed()) return run_spectrum(spectrum_args);
    } catch (const std::exception& e) {
        std::cerr << "unshade: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
