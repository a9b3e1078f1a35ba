#pragma once

#include <string>
#include <string_view>

#include "unshade/grid.hpp"

namespace unshade {

enum class SsimWindow {
    Gauss11,   // 11x11 Gaussian window, sigma 1.5 (the original construction)
    Uniform7,  // 7x7 uniform window with sample covariance (library-compatible)
};

const char* name(SsimWindow window);
SsimWindow parse_ssim_window(std::string_view text);

double mse(const GridField& a, const GridField& b);

/// 10 log10(data_range^2 / mse); +infinity when mse == 0.
double psnr(const GridField& a, const GridField& b, double data_range);

/// Mean local SSIM over all window positions fully inside the image.
/// K1 = 0.01, K2 = 0.03. Both image dimensions must be at least the window
/// size (11 or 7).
double ssim(const GridField& a, const GridField& b, double data_range,
            SsimWindow window = SsimWindow::Gauss11);

struct MetricReport {
    double psnr_db = 0.0;  // +infinity marks identical inputs
    double ssim = 0.0;
    double mse = 0.0;
    double data_range = 0.0;
    SsimWindow window = SsimWindow::Gauss11;
};

MetricReport compare(const GridField& a, const GridField& b, double data_range,
                     SsimWindow window = SsimWindow::Gauss11);

/// "PSNR: %.2f dB\nSSIM: %.4f\nMSE: %.2f\n" (PSNR prints "inf" when mse = 0).
std::string human_readable(const MetricReport& report);

}  // namespace unshade
