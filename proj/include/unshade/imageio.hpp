#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "unshade/grid.hpp"

namespace unshade {

enum class ShadingKind { LinearRamp, Radial, CornerVignette };

const char* name(ShadingKind kind);
ShadingKind parse_shading_kind(std::string_view text);

/// Deterministic multiplicative shading model; mask values lie in
/// [1 - strength, 1]. `seed` is reserved for stochastic jitter and is
/// recorded in manifests; the built-in masks are closed-form.
struct ShadingSpec {
    ShadingKind kind = ShadingKind::LinearRamp;
    double strength = 0.5;  // in [0, 1)
    std::uint64_t seed = 0;
};

/// Loads a PGM (P2/P5, maxval <= 255) or 8-bit PNG (gray or RGB) image as a
/// luminance field normalized to [0,1]; RGB is reduced with Rec. 601 luma.
GridField load_luminance(const std::filesystem::path& path, double h = kDefaultMeshSpacing);

/// Writes an 8-bit grayscale PGM (.pgm/.pnm) or PNG (.png); values are
/// clamped to [0,1] and quantized as round(255 v).
void save_gray(const GridField& field, const std::filesystem::path& path);

GridField shading_mask(int rows, int cols, double h, const ShadingSpec& spec);

/// clean * mask(spec), clamped to [0,1].
GridField apply_shading(const GridField& clean, const ShadingSpec& spec);

}  // namespace unshade
