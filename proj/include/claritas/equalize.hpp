#ifndef CLARITAS_EQUALIZE_HPP
#define CLARITAS_EQUALIZE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "claritas/image.hpp"

namespace claritas {

/**
 * @brief 256-bin intensity histogram with cumulative counts.
 *
 * cumulative[v] is the number of pixels with value <= v, so
 * cumulative[255] == total. Probabilities are counts/total.
 */
struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};
    std::array<std::uint64_t, 256> cumulative{};
    std::uint64_t total = 0;

    /// Recomputes cumulative and total from counts.
    void rebuild_cumulative();
};

/// Histogram of a 1-channel image.
Histogram256 histogram(const RasterImage& gray);

/**
 * @brief Global histogram equalization,
 * h(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255)
 * where cdf_min is the smallest nonzero cumulative count.
 *
 * The mapping is monotone non-decreasing; the lowest occupied bin maps to 0
 * and the highest to 255. A constant image makes the denominator zero; it is
 * returned unchanged and *degenerate (when given) is set.
 */
RasterImage equalize_global(const RasterImage& gray, bool* degenerate = nullptr);

/// CLAHE parameters. Construction validates: clip_limit > 0, tiles >= 1.
struct ClaheParams {
    double clip_limit = 2.0;
    int tiles_x = 8;
    int tiles_y = 8;

    ClaheParams() = default;
    ClaheParams(double clip, int tx, int ty);
};

/**
 * @brief Clip histogram bins at T = max(1, floor(clip_limit * area / 256))
 * and redistribute the excess.
 *
 * Every bin first gains floor(excess / 256); the remainder r is handed out
 * one count each to bins 0, s, 2s, ... with s = floor(256 / r). The total
 * count is conserved exactly.
 */
Histogram256 clip_and_redistribute(const Histogram256& hist, std::uint64_t area,
                                   double clip_limit);

/// Per-tile equalization table: lut[v] = clamp(round(cumulative[v] * 255 / area)).
/// Unlike equalize_global this scaled-CDF form has no cdf_min subtraction.
std::array<std::uint8_t, 256> tile_lut(const Histogram256& hist, std::uint64_t area);

/// Per-tile mapping tables plus the tile geometry they were built on.
struct TileLuts {
    int tiles_x = 0;
    int tiles_y = 0;
    int tile_width = 0;   // in the padded image
    int tile_height = 0;
    std::vector<std::array<std::uint8_t, 256>> luts;  // row-major tile order

    const std::array<std::uint8_t, 256>& at(int tx, int ty) const {
        return luts[static_cast<std::size_t>(ty) * tiles_x + tx];
    }
};

/// Reflect-101 pad on the right/bottom to new_w x new_h
/// (..., p2, p1 | p0, p1, p2, ... : the edge pixel is not duplicated).
RasterImage reflect_pad(const RasterImage& gray, int new_w, int new_h);

/// Clipped per-tile LUTs of an image whose dimensions divide the tile grid.
TileLuts build_tile_luts(const RasterImage& padded_gray, const ClaheParams& params);

/**
 * @brief Contrast Limited Adaptive Histogram Equalization.
 *
 * Pipeline: reflect-101 pad so the tile grid divides evenly, per-tile clipped
 * histogram and scaled-CDF LUT, then per-pixel bilinear interpolation between
 * the four nearest tile LUTs (tile-center coordinates, neighbor indices
 * clamped at borders, weights in double precision, result rounded
 * half-away-from-zero), and crop back to the original size.
 *
 * Requires width >= tiles_x and height >= tiles_y (throws ImageTooSmall).
 * With a 1x1 grid and a non-clipping limit this degenerates to the global
 * scaled-CDF equalization round(cdf(v) * 255 / N).
 */
RasterImage clahe(const RasterImage& gray, const ClaheParams& params = {});

}  // namespace claritas

#endif  // CLARITAS_EQUALIZE_HPP
