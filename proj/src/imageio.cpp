#include "unshade/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace unshade {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& message) {
    throw std::runtime_error(path.string() + ": " + message);
}

// --- PGM -------------------------------------------------------------------

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) {
            token.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
                token.push_back(static_cast<char>(in.get()));
            }
            return token;
        }
    }
    return token;
}

int parse_header_int(std::istream& in, const std::filesystem::path& path, const char* what) {
    const std::string token = next_pgm_token(in);
    if (token.empty()) fail(path, std::string("truncated PGM header (") + what + ")");
    try {
        return std::stoi(token);
    } catch (const std::exception&) {
        fail(path, std::string("bad PGM header field (") + what + "): " + token);
    }
}

GridField load_pgm(std::ifstream& in, const std::filesystem::path& path, bool binary, double h) {
    const int cols = parse_header_int(in, path, "width");
    const int rows = parse_header_int(in, path, "height");
    const int maxval = parse_header_int(in, path, "maxval");
    if (cols <= 0 || rows <= 0) fail(path, "nonpositive PGM dimensions");
    if (maxval <= 0) fail(path, "nonpositive PGM maxval");
    if (maxval > 255) fail(path, "PGM bit depth above 8 is not supported");

    std::vector<double> values(static_cast<std::size_t>(rows) * cols);
    if (binary) {
        // Header ends with exactly one whitespace byte before the raster.
        const int sep = in.get();
        if (sep == EOF || !std::isspace(sep)) fail(path, "malformed PGM header");
        std::vector<unsigned char> raw(values.size());
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail(path, "truncated PGM raster");
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (raw[k] > maxval) fail(path, "PGM sample exceeds maxval");
            values[k] = static_cast<double>(raw[k]) / maxval;
        }
    } else {
        for (std::size_t k = 0; k < values.size(); ++k) {
            const int v = parse_header_int(in, path, "sample");
            if (v < 0 || v > maxval) fail(path, "PGM sample out of range");
            values[k] = static_cast<double>(v) / maxval;
        }
    }
    return GridField(rows, cols, h, std::move(values));
}

void save_pgm(const GridField& field, const std::filesystem::path& path,
              const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P5\n" << field.cols() << " " << field.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

// --- PNG -------------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

GridField load_png(const std::filesystem::path& path, double h) {
    FileHandle fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "libpng init failed");
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> pixels;
    int rows = 0, cols = 0, channels = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "corrupt PNG");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_byte depth = png_get_bit_depth(png, info);
    if (depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "PNG bit depth above 8 is not supported");
    }
    const png_byte color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    cols = static_cast<int>(png_get_image_width(png, info));
    rows = static_cast<int>(png_get_image_height(png, info));
    channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported PNG layout (expected 8-bit gray or RGB)");
    }

    const std::size_t stride = static_cast<std::size_t>(cols) * channels;
    pixels.resize(static_cast<std::size_t>(rows) * stride);
    row_ptrs.resize(rows);
    for (int i = 0; i < rows; ++i) row_ptrs[i] = pixels.data() + i * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<double> values(static_cast<std::size_t>(rows) * cols);
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (channels == 1) {
            values[k] = pixels[k] / 255.0;
        } else {
            const unsigned char* px = &pixels[k * 3];
            // Rec. 601 luma
            values[k] = (0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]) / 255.0;
        }
    }
    return GridField(rows, cols, h, std::move(values));
}

void save_png(const GridField& field, const std::filesystem::path& path,
              const std::vector<unsigned char>& bytes) {
    FileHandle fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "PNG write failed");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, field.cols(), field.rows(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int i = 0; i < field.rows(); ++i) {
        png_write_row(png, const_cast<png_bytep>(bytes.data() +
                                                 static_cast<std::size_t>(i) * field.cols()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<unsigned char> quantize(const GridField& field) {
    std::vector<unsigned char> bytes(field.size());
    auto values = field.values();
    for (std::size_t k = 0; k < bytes.size(); ++k) {
        const double v = std::min(std::max(values[k], 0.0), 1.0);
        bytes[k] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
    return bytes;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

GridField load_luminance(const std::filesystem::path& path, double h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) fail(path, "file too short");

    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        return load_pgm(in, path, magic[1] == '5', h);
    }
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path, h);
    }
    fail(path, "unsupported format (expected PGM P2/P5 or PNG)");
}

void save_gray(const GridField& field, const std::filesystem::path& path) {
    const std::vector<unsigned char> bytes = quantize(field);
    const std::string ext = lower_extension(path);
    if (ext == ".pgm" || ext == ".pnm") {
        save_pgm(field, path, bytes);
    } else if (ext == ".png") {
        save_png(field, path, bytes);
    } else {
        fail(path, "unsupported output extension (expected .pgm, .pnm, or .png)");
    }
}

GridField shading_mask(int rows, int cols, double h, const ShadingSpec& spec) {
    if (!(spec.strength >= 0.0 && spec.strength < 1.0)) {
        throw std::invalid_argument("shading strength must lie in [0, 1)");
    }
    GridField mask(rows, cols, h, 1.0);
    const double s = spec.strength;
    switch (spec.kind) {
        case ShadingKind::LinearRamp:
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    mask(i, j) = 1.0 - s * (static_cast<double>(j) / (cols - 1));
                }
            }
            break;
        case ShadingKind::Radial: {
            const double ci = (rows - 1) / 2.0;
            const double cj = (cols - 1) / 2.0;
            const double r2_max = ci * ci + cj * cj;
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    const double r2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
                    mask(i, j) = 1.0 - s * (r2 / r2_max);
                }
            }
            break;
        }
        case ShadingKind::CornerVignette: {
            const double d_max = std::sqrt(static_cast<double>(rows - 1) * (rows - 1) +
                                           static_cast<double>(cols - 1) * (cols - 1));
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    const double d = std::sqrt(static_cast<double>(i) * i +
                                               static_cast<double>(j) * j);
                    mask(i, j) = 1.0 - s * (d / d_max);
                }
            }
            break;
        }
    }
    return mask;
}

GridField apply_shading(const GridField& clean, const ShadingSpec& spec) {
    const GridField mask = shading_mask(clean.rows(), clean.cols(), clean.h(), spec);
    GridField out(clean.rows(), clean.cols(), clean.h());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double v = clean.values()[k] * mask.values()[k];
        out.values()[k] = std::min(std::max(v, 0.0), 1.0);
    }
    return out;
}

const char* name(ShadingKind kind) {
    switch (kind) {
        case ShadingKind::LinearRamp: return "ramp";
        case ShadingKind::Radial: return "radial";
        case ShadingKind::CornerVignette: return "vignette";
    }
    return "ramp";
}

ShadingKind parse_shading_kind(std::string_view text) {
    if (text == "ramp") return ShadingKind::LinearRamp;
    if (text == "radial") return ShadingKind::Radial;
    if (text == "vignette") return ShadingKind::CornerVignette;
    throw std::invalid_argument("unknown shading kind: " + std::string(text));
}

}  // namespace unshade
