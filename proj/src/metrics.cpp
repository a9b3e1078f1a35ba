#include "unshade/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace unshade {

namespace {

void check_pair(const GridField& a, const GridField& b, const char* op) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
    }
}

std::vector<double> window_weights(SsimWindow window) {
    if (window == SsimWindow::Gauss11) {
        constexpr int kSize = 11;
        constexpr double kSigma = 1.5;
        std::vector<double> w(kSize);
        double sum = 0.0;
        for (int k = 0; k < kSize; ++k) {
            const double x = k - (kSize - 1) / 2.0;
            w[k] = std::exp(-x * x / (2.0 * kSigma * kSigma));
            sum += w[k];
        }
        for (double& v : w) v /= sum;
        return w;
    }
    return std::vector<double>(7, 1.0 / 7.0);
}

// Separable 'valid' convolution with a symmetric 1-D kernel, rows then
// columns. Input is rows x cols row-major; output (rows-win+1) x (cols-win+1).
std::vector<double> valid_sepconv(const std::vector<double>& img, int rows, int cols,
                                  const std::vector<double>& w) {
    const int win = static_cast<int>(w.size());
    const int cols_out = cols - win + 1;
    const int rows_out = rows - win + 1;
    std::vector<double> tmp(static_cast<std::size_t>(rows) * cols_out, 0.0);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols_out; ++j) {
            double acc = 0.0;
            for (int k = 0; k < win; ++k) acc += w[k] * img[i * cols + j + k];
            tmp[i * cols_out + j] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(rows_out) * cols_out, 0.0);
    for (int i = 0; i < rows_out; ++i) {
        for (int j = 0; j < cols_out; ++j) {
            double acc = 0.0;
            for (int k = 0; k < win; ++k) acc += w[k] * tmp[(i + k) * cols_out + j];
            out[i * cols_out + j] = acc;
        }
    }
    return out;
}

}  // namespace

double mse(const GridField& a, const GridField& b) {
    check_pair(a, b, "mse");
    double acc = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) {
        const double d = va[k] - vb[k];
        acc += d * d;
    }
    return acc / static_cast<double>(va.size());
}

double psnr(const GridField& a, const GridField& b, double data_range) {
    if (!(data_range > 0.0)) {
        throw std::invalid_argument("psnr: data_range must be positive");
    }
    const double err = mse(a, b);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(data_range * data_range / err);
}

double ssim(const GridField& a, const GridField& b, double data_range, SsimWindow window) {
    check_pair(a, b, "ssim");
    if (!(data_range > 0.0)) {
        throw std::invalid_argument("ssim: data_range must be positive");
    }
    const std::vector<double> w = window_weights(window);
    const int win = static_cast<int>(w.size());
    const int rows = a.rows();
    const int cols = a.cols();
    if (rows < win || cols < win) {
        throw std::invalid_argument("ssim: image smaller than the " + std::to_string(win) + "x" +
                                    std::to_string(win) + " window");
    }
    // Uniform7 follows the common library convention of sample covariance;
    // Gauss11 uses the population moments of the original construction.
    const double np = static_cast<double>(win) * win;
    const double cov_norm = window == SsimWindow::Uniform7 ? np / (np - 1.0) : 1.0;

    std::vector<double> xa(a.values().begin(), a.values().end());
    std::vector<double> xb(b.values().begin(), b.values().end());
    std::vector<double> xaa(xa.size()), xbb(xa.size()), xab(xa.size());
    for (std::size_t k = 0; k < xa.size(); ++k) {
        xaa[k] = xa[k] * xa[k];
        xbb[k] = xb[k] * xb[k];
        xab[k] = xa[k] * xb[k];
    }
    const auto ua = valid_sepconv(xa, rows, cols, w);
    const auto ub = valid_sepconv(xb, rows, cols, w);
    const auto saa = valid_sepconv(xaa, rows, cols, w);
    const auto sbb = valid_sepconv(xbb, rows, cols, w);
    const auto sab = valid_sepconv(xab, rows, cols, w);

    const double c1 = (0.01 * data_range) * (0.01 * data_range);
    const double c2 = (0.03 * data_range) * (0.03 * data_range);

    double acc = 0.0;
    for (std::size_t k = 0; k < ua.size(); ++k) {
        const double va = cov_norm * (saa[k] - ua[k] * ua[k]);
        const double vb = cov_norm * (sbb[k] - ub[k] * ub[k]);
        const double cab = cov_norm * (sab[k] - ua[k] * ub[k]);
        const double num = (2.0 * ua[k] * ub[k] + c1) * (2.0 * cab + c2);
        const double den = (ua[k] * ua[k] + ub[k] * ub[k] + c1) * (va + vb + c2);
        acc += num / den;
    }
    return acc / static_cast<double>(ua.size());
}

MetricReport compare(const GridField& a, const GridField& b, double data_range,
                     SsimWindow window) {
    MetricReport report;
    report.mse = mse(a, b);
    report.psnr_db = psnr(a, b, data_range);
    report.ssim = ssim(a, b, data_range, window);
    report.data_range = data_range;
    report.window = window;
    return report;
}

std::string human_readable(const MetricReport& report) {
    char buf[128];
    std::string out;
    if (std::isinf(report.psnr_db)) {
        out += "PSNR: inf dB\n";
    } else {
        std::snprintf(buf, sizeof buf, "PSNR: %.2f dB\n", report.psnr_db);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "SSIM: %.4f\n", report.ssim);
    out += buf;
    std::snprintf(buf, sizeof buf, "MSE: %.2f\n", report.mse);
    out += buf;
    return out;
}

const char* name(SsimWindow window) {
    return window == SsimWindow::Gauss11 ? "gauss11" : "uniform7";
}

SsimWindow parse_ssim_window(std::string_view text) {
    if (text == "gauss11") return SsimWindow::Gauss11;
    if (text == "uniform7") return SsimWindow::Uniform7;
    throw std::invalid_argument("unknown ssim window: " + std::string(text));
}

}  // namespace unshade
