#include "claritas/equalize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "claritas/error.hpp"
#include "claritas/numeric.hpp"

namespace claritas {

namespace {

void require_gray(const RasterImage& img, const char* op) {
    if (img.channels != 1) {
        throw std::invalid_argument(std::string(op) + ": expects a 1-channel image");
    }
}

// Reflect-101 index: ..., 2, 1 | 0, 1, 2, ..., n-1 | n-2, n-3, ...
int mirror_index(int c, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    int m = c % period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

// Neighbor tile indices and blend fraction along one axis. Tile i has its
// center at i * tile_size + (tile_size - 1) / 2; coordinates outside the
// outer ring of centers clamp to the edge tile.
struct AxisBlend {
    int lo;
    int hi;
    double frac;
};

AxisBlend axis_blend(int coord, int tile_size, int tiles) {
    const double half = (tile_size - 1) / 2.0;
    const double pos = (coord - half) / tile_size;
    int lo = static_cast<int>(std::floor(pos));
    if (lo < 0) return {0, 0, 0.0};
    if (lo >= tiles - 1) return {tiles - 1, tiles - 1, 0.0};
    const double frac = (coord - (lo * static_cast<double>(tile_size) + half)) / tile_size;
    return {lo, lo + 1, frac};
}

}  // namespace

void Histogram256::rebuild_cumulative() {
    std::uint64_t cum = 0;
    for (int v = 0; v < 256; ++v) {
        cum += counts[v];
        cumulative[v] = cum;
    }
    total = cum;
}

Histogram256 histogram(const RasterImage& gray) {
    require_gray(gray, "histogram");
    Histogram256 h;
    for (std::uint8_t v : gray.data) h.counts[v]++;
    h.rebuild_cumulative();
    return h;
}

RasterImage equalize_global(const RasterImage& gray, bool* degenerate) {
    require_gray(gray, "equalize_global");
    if (degenerate) *degenerate = false;

    const Histogram256 h = histogram(gray);
    std::uint64_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
        if (h.counts[v] > 0) {
            cdf_min = h.cumulative[v];
            break;
        }
    }
    if (cdf_min == h.total) {
        // Constant image: the mapping denominator is zero. Pass through.
        if (degenerate) *degenerate = true;
        return gray;
    }

    const double denom = static_cast<double>(h.total - cdf_min);
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
        const double num = static_cast<double>(h.cumulative[v]) - static_cast<double>(cdf_min);
        lut[v] = round_to_u8(num / denom * 255.0);
    }

    RasterImage out(gray.width, gray.height, 1);
    for (std::size_t i = 0; i < gray.data.size(); ++i) out.data[i] = lut[gray.data[i]];
    return out;
}

ClaheParams::ClaheParams(double clip, int tx, int ty)
    : clip_limit(clip), tiles_x(tx), tiles_y(ty) {
    if (!(clip > 0.0)) throw std::invalid_argument("ClaheParams: clip_limit must be > 0");
    if (tx < 1 || ty < 1) throw std::invalid_argument("ClaheParams: tile counts must be >= 1");
}

Histogram256 clip_and_redistribute(const Histogram256& hist, std::uint64_t area,
                                   double clip_limit) {
    const double raw = clip_limit * static_cast<double>(area) / 256.0;
    std::uint64_t threshold;
    if (raw >= static_cast<double>(area)) {
        threshold = area;  // no bin can exceed the tile area; avoids overflow
    } else {
        threshold = static_cast<std::uint64_t>(raw);
        if (threshold < 1) threshold = 1;
    }

    Histogram256 out = hist;
    std::uint64_t excess = 0;
    for (int v = 0; v < 256; ++v) {
        if (out.counts[v] > threshold) {
            excess += out.counts[v] - threshold;
            out.counts[v] = threshold;
        }
    }
    const std::uint64_t per_bin = excess / 256;
    const std::uint64_t remainder = excess % 256;
    if (per_bin > 0) {
        for (int v = 0; v < 256; ++v) out.counts[v] += per_bin;
    }
    if (remainder > 0) {
        const int stride = static_cast<int>(256 / remainder);
        for (std::uint64_t k = 0; k < remainder; ++k) out.counts[k * stride]++;
    }
    out.rebuild_cumulative();
    return out;
}

std::array<std::uint8_t, 256> tile_lut(const Histogram256& hist, std::uint64_t area) {
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
        lut[v] = round_to_u8(static_cast<double>(hist.cumulative[v]) * 255.0 /
                             static_cast<double>(area));
    }
    return lut;
}

RasterImage reflect_pad(const RasterImage& gray, int new_w, int new_h) {
    require_gray(gray, "reflect_pad");
    if (new_w == gray.width && new_h == gray.height) return gray;

    RasterImage out(new_w, new_h, 1);
    for (int y = 0; y < new_h; ++y) {
        const int sy = mirror_index(y, gray.height);
        for (int x = 0; x < new_w; ++x) {
            out.at(x, y) = gray.at(mirror_index(x, gray.width), sy);
        }
    }
    return out;
}

TileLuts build_tile_luts(const RasterImage& padded_gray, const ClaheParams& params) {
    require_gray(padded_gray, "build_tile_luts");
    if (padded_gray.width % params.tiles_x != 0 || padded_gray.height % params.tiles_y != 0) {
        throw std::invalid_argument("build_tile_luts: dimensions must divide the tile grid");
    }

    TileLuts result;
    result.tiles_x = params.tiles_x;
    result.tiles_y = params.tiles_y;
    result.tile_width = padded_gray.width / params.tiles_x;
    result.tile_height = padded_gray.height / params.tiles_y;
    result.luts.resize(static_cast<std::size_t>(params.tiles_x) * params.tiles_y);

    const std::uint64_t area =
        static_cast<std::uint64_t>(result.tile_width) * result.tile_height;

    for (int ty = 0; ty < params.tiles_y; ++ty) {
        for (int tx = 0; tx < params.tiles_x; ++tx) {
            Histogram256 h;
            const int x0 = tx * result.tile_width;
            const int y0 = ty * result.tile_height;
            for (int y = y0; y < y0 + result.tile_height; ++y) {
                for (int x = x0; x < x0 + result.tile_width; ++x) {
                    h.counts[padded_gray.at(x, y)]++;
                }
            }
            h.rebuild_cumulative();
            const Histogram256 clipped = clip_and_redistribute(h, area, params.clip_limit);
            result.luts[static_cast<std::size_t>(ty) * params.tiles_x + tx] =
                tile_lut(clipped, area);
        }
    }
    return result;
}

RasterImage clahe(const RasterImage& gray, const ClaheParams& params) {
    require_gray(gray, "clahe");
    if (gray.width < params.tiles_x || gray.height < params.tiles_y) {
        throw ImageTooSmall("clahe: image must be at least " +
                            std::to_string(params.tiles_x) + "x" +
                            std::to_string(params.tiles_y) + " for a " +
                            std::to_string(params.tiles_x) + "x" +
                            std::to_string(params.tiles_y) + " tile grid");
    }

    const int padded_w = (gray.width + params.tiles_x - 1) / params.tiles_x * params.tiles_x;
    const int padded_h = (gray.height + params.tiles_y - 1) / params.tiles_y * params.tiles_y;
    const RasterImage padded = reflect_pad(gray, padded_w, padded_h);
    const TileLuts tiles = build_tile_luts(padded, params);

    RasterImage out(gray.width, gray.height, 1);
    for (int y = 0; y < gray.height; ++y) {
        const AxisBlend by = axis_blend(y, tiles.tile_height, params.tiles_y);
        for (int x = 0; x < gray.width; ++x) {
            const AxisBlend bx = axis_blend(x, tiles.tile_width, params.tiles_x);
            const std::uint8_t v = padded.at(x, y);
            const double top = (1.0 - bx.frac) * tiles.at(bx.lo, by.lo)[v] +
                               bx.frac * tiles.at(bx.hi, by.lo)[v];
            const double bottom = (1.0 - bx.frac) * tiles.at(bx.lo, by.hi)[v] +
                                  bx.frac * tiles.at(bx.hi, by.hi)[v];
            out.at(x, y) = round_to_u8((1.0 - by.frac) * top + by.frac * bottom);
        }
    }
    return out;
}

}  // namespace claritas
