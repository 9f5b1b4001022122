#ifndef CLARITAS_IMAGE_HPP
#define CLARITAS_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace claritas {

/**
 * @brief 8-bit raster image, row-major, interleaved channels.
 *
 * The universal currency of the toolkit: 1 channel (grayscale) or
 * 3 channels (RGB). Pixel (x, y) channel c lives at
 * data[(y * width + x) * channels + c].
 *
 * Instances are treated as immutable once handed to an operation; all
 * operations are pure functions, so distinct images may be processed
 * concurrently without synchronization.
 */
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    RasterImage() = default;

    /// Allocates a w x h image with the given channel count, zero-filled.
    /// Throws std::invalid_argument unless w >= 1, h >= 1, c in {1, 3}.
    RasterImage(int w, int h, int c);

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }
    std::size_t sample_count() const { return pixel_count() * channels; }

    bool operator==(const RasterImage&) const = default;
};

/**
 * @brief Real-valued single-channel plane (color components, entropy maps,
 * weight windows). Row-major doubles; producers guarantee finite values.
 */
struct FloatPlane {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    FloatPlane() = default;
    FloatPlane(int w, int h);

    double& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    double at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    /// True when no element is NaN or infinite.
    bool all_finite() const;
};

/**
 * @brief Grayscale conversion, BT.601 luma weights.
 *
 * 3-channel: gray = round(0.299 R + 0.587 G + 0.114 B), halfway cases away
 * from zero. 1-channel input is copied unchanged.
 */
RasterImage to_grayscale(const RasterImage& img);

}  // namespace claritas

#endif  // CLARITAS_IMAGE_HPP
