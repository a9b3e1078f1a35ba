#include "unshade/json_io.hpp"

#include <cmath>
#include <sstream>

namespace unshade {

namespace {

OrderedJson stats_json(const FieldStats& s) {
    return OrderedJson{{"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

}  // namespace

OrderedJson solve_report_json(const SolveReport& report) {
    OrderedJson j;
    j["iterations"] = report.iterations;
    j["final_step_inf_norm"] = report.final_step_inf_norm;
    j["final_residual_l2"] = report.final_residual_l2;
    j["converged"] = report.converged;
    j["contraction_samples"] = report.contraction_samples;
    j["clip_events"] = report.clip_events;
    return j;
}

OrderedJson metric_report_json(const MetricReport& report) {
    OrderedJson j;
    // JSON has no infinity literal; identical inputs serialize as "inf".
    if (std::isinf(report.psnr_db)) {
        j["psnr_db"] = "inf";
    } else {
        j["psnr_db"] = report.psnr_db;
    }
    j["ssim"] = report.ssim;
    j["mse"] = report.mse;
    j["data_range"] = report.data_range;
    j["ssim_window"] = name(report.window);
    return j;
}

OrderedJson restore_step_json(const RestoreStep& step) {
    OrderedJson j;
    j["step"] = step.step;
    j["solve"] = solve_report_json(step.solve);
    j["u"] = stats_json(step.u);
    j["V"] = stats_json(step.potential);
    j["L"] = stats_json(step.illumination);
    j["increment_l2"] = step.increment_l2;
    return j;
}

std::string trace_jsonl(const RestoreTrace& trace) {
    std::string out;
    for (const RestoreStep& step : trace.steps) {
        out += restore_step_json(step).dump();
        out += '\n';
    }
    if (trace.aborted_step) {
        OrderedJson j;
        j["aborted_step"] = *trace.aborted_step;
        j["reason"] = trace.abort_reason;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string trace_csv(const RestoreTrace& trace) {
    std::ostringstream out;
    out << "step,iterations,converged,final_step_inf_norm,final_residual_l2,clip_events,"
           "u_min,u_max,u_mean,V_min,V_max,V_mean,L_min,L_max,L_mean,increment_l2\n";
    out.precision(17);
    for (const RestoreStep& s : trace.steps) {
        out << s.step << ',' << s.solve.iterations << ',' << (s.solve.converged ? 1 : 0) << ','
            << s.solve.final_step_inf_norm << ',' << s.solve.final_residual_l2 << ','
            << s.solve.clip_events << ',' << s.u.min << ',' << s.u.max << ',' << s.u.mean << ','
            << s.potential.min << ',' << s.potential.max << ',' << s.potential.mean << ','
            << s.illumination.min << ',' << s.illumination.max << ',' << s.illumination.mean << ','
            << s.increment_l2 << '\n';
    }
    return out.str();
}

}  // namespace unshade
