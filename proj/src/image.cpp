#include "claritas/image.hpp"

#include <cmath>
#include <stdexcept>

#include "claritas/numeric.hpp"

namespace claritas {

RasterImage::RasterImage(int w, int h, int c) : width(w), height(h), channels(c) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("RasterImage: width and height must be >= 1");
    }
    if (c != 1 && c != 3) {
        throw std::invalid_argument("RasterImage: channels must be 1 or 3");
    }
    data.assign(static_cast<std::size_t>(w) * h * c, 0);
}

FloatPlane::FloatPlane(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("FloatPlane: width and height must be >= 1");
    }
    data.assign(static_cast<std::size_t>(w) * h, 0.0);
}

bool FloatPlane::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.channels == 1) return img;

    RasterImage out(img.width, img.height, 1);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.data[i] = round_to_u8(0.299 * r + 0.587 * g + 0.114 * b);
    }
    return out;
}

}  // namespace claritas
