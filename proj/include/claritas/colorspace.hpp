#ifndef CLARITAS_COLORSPACE_HPP
#define CLARITAS_COLORSPACE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "claritas/image.hpp"

namespace claritas {

enum class Space { Rgb, Hsv, Xyz, Lab, Yuv, Yiq };

std::string space_name(Space s);
std::optional<Space> space_from_name(const std::string& name);

/**
 * @brief Three equally-sized component planes tagged with their color space.
 *
 * Component semantics per space: RGB in [0,1]; HSV with H in turns [0,1),
 * S,V in [0,1]; XYZ nominally [0, 1.0891]; LAB with L in [0,100] and a,b in
 * [-128,127]; YUV/YIQ with Y in [0,1] and signed chroma.
 */
struct ColorPlanes {
    Space space = Space::Rgb;
    FloatPlane c0, c1, c2;

    int width() const { return c0.width; }
    int height() const { return c0.height; }
};

/// Count of inverse-conversion components that fell outside [0,1] and were
/// clamped (out-of-gamut results are clamped, never an error).
struct GamutStats {
    std::uint64_t clamped = 0;
};

/// 8-bit image to RGB planes normalized by /255. A grayscale image is
/// promoted to R=G=B.
ColorPlanes rgb_planes(const RasterImage& img);

// Forward conversions take RGB planes; inverses return RGB planes. All math
// is double precision on [0,1]-normalized RGB. Forward-then-inverse
// reproduces inputs within 1e-4 per component. A wrong input tag throws
// SpaceTagMismatch; planes of differing sizes throw DimensionMismatch.
ColorPlanes rgb_to_hsv(const ColorPlanes& rgb);
ColorPlanes hsv_to_rgb(const ColorPlanes& hsv);

/// sRGB/D65 with gamma linearization.
ColorPlanes rgb_to_xyz(const ColorPlanes& rgb);
ColorPlanes xyz_to_rgb(const ColorPlanes& xyz, GamutStats* stats = nullptr);

/// CIE 1976 L*a*b*, D65 white point, composed via XYZ.
ColorPlanes rgb_to_lab(const ColorPlanes& rgb);
ColorPlanes lab_to_rgb(const ColorPlanes& lab, GamutStats* stats = nullptr);

/// BT.601 luma; chroma as scaled B-Y / R-Y differences, so achromatic
/// inputs produce exactly zero U and V.
ColorPlanes rgb_to_yuv(const ColorPlanes& rgb);
ColorPlanes yuv_to_rgb(const ColorPlanes& yuv, GamutStats* stats = nullptr);

ColorPlanes rgb_to_yiq(const ColorPlanes& rgb);
ColorPlanes yiq_to_rgb(const ColorPlanes& yiq, GamutStats* stats = nullptr);

/// Dispatch helpers over the Space enum (identity for Space::Rgb).
ColorPlanes convert_from_rgb(const ColorPlanes& rgb, Space to);
ColorPlanes convert_to_rgb(const ColorPlanes& planes, GamutStats* stats = nullptr);

/// Nominal component range used by the 8-bit rescaling, {lo, hi}.
/// Part of the stable external contract.
struct ComponentRange {
    double lo;
    double hi;
};
ComponentRange component_range(Space space, int component);

/// Affine rescale of each component from its nominal range to [0,255],
/// rounded half-away-from-zero and clamped.
RasterImage planes_to_raster(const ColorPlanes& planes);

/// Inverse of planes_to_raster: bytes back to nominal-range component values.
ColorPlanes raster_to_planes(const RasterImage& img, Space space);

}  // namespace claritas

#endif  // CLARITAS_COLORSPACE_HPP
