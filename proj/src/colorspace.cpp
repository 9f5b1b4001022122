#include "claritas/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "claritas/error.hpp"
#include "claritas/numeric.hpp"

namespace claritas {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// sRGB -> XYZ (D65), applied to linearized channels.
constexpr Mat3 kRgbToXyz = {{{0.412453, 0.357580, 0.180423},
                             {0.212671, 0.715160, 0.072169},
                             {0.019334, 0.119193, 0.950227}}};

constexpr Mat3 kRgbToYiq = {{{0.299, 0.587, 0.114},
                             {0.5959, -0.2746, -0.3213},
                             {0.2115, -0.5227, 0.3112}}};

// D65 white point for LAB normalization.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

// BT.601 luma; chroma scales chosen so the U/V rows are exact multiples of
// (B - Y) and (R - Y) and therefore sum to zero exactly.
constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;
const double kUScale = 0.436 / 0.886;
const double kVScale = 0.615 / 0.701;

Mat3 inverse(const Mat3& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    Mat3 inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

const Mat3 kXyzToRgb = inverse(kRgbToXyz);
const Mat3 kYiqToRgb = inverse(kRgbToYiq);

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

// CIE f(t), threshold (6/29)^3.
double lab_f(double t) {
    constexpr double eps = 216.0 / 24389.0;
    constexpr double delta = 6.0 / 29.0;
    return t > eps ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

double lab_f_inv(double f) {
    constexpr double delta = 6.0 / 29.0;
    return f > delta ? f * f * f : 3.0 * delta * delta * (f - 4.0 / 29.0);
}

void require_dims(const ColorPlanes& p, const char* op) {
    if (p.c0.width != p.c1.width || p.c0.width != p.c2.width ||
        p.c0.height != p.c1.height || p.c0.height != p.c2.height) {
        throw DimensionMismatch(std::string(op) + ": component planes differ in size");
    }
}

void require_space(const ColorPlanes& p, Space expected, const char* op) {
    if (p.space != expected) {
        throw SpaceTagMismatch(std::string(op) + ": input tagged " + space_name(p.space) +
                               ", expected " + space_name(expected));
    }
    require_dims(p, op);
}

ColorPlanes like(const ColorPlanes& src, Space space) {
    ColorPlanes out;
    out.space = space;
    out.c0 = FloatPlane(src.width(), src.height());
    out.c1 = FloatPlane(src.width(), src.height());
    out.c2 = FloatPlane(src.width(), src.height());
    return out;
}

double clamp_unit(double v, GamutStats* stats) {
    // Anything beyond float-noise distance from [0,1] counts as out of gamut.
    if (v < 0.0) {
        if (stats && v < -1e-9) stats->clamped++;
        return 0.0;
    }
    if (v > 1.0) {
        if (stats && v > 1.0 + 1e-9) stats->clamped++;
        return 1.0;
    }
    return v;
}

// Applies a per-triple kernel over three planes.
template <typename F>
ColorPlanes map_planes(const ColorPlanes& in, Space out_space, F&& kernel) {
    ColorPlanes out = like(in, out_space);
    const std::size_t n = in.c0.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        kernel(in.c0.data[i], in.c1.data[i], in.c2.data[i], out.c0.data[i], out.c1.data[i],
               out.c2.data[i]);
    }
    return out;
}

void xyz_of_rgb(double r, double g, double b, double& x, double& y, double& z) {
    const double rl = srgb_to_linear(r);
    const double gl = srgb_to_linear(g);
    const double bl = srgb_to_linear(b);
    x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
    y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
    z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;
}

void rgb_of_xyz(double x, double y, double z, GamutStats* stats, double& r, double& g,
                double& b) {
    const double rl = kXyzToRgb[0][0] * x + kXyzToRgb[0][1] * y + kXyzToRgb[0][2] * z;
    const double gl = kXyzToRgb[1][0] * x + kXyzToRgb[1][1] * y + kXyzToRgb[1][2] * z;
    const double bl = kXyzToRgb[2][0] * x + kXyzToRgb[2][1] * y + kXyzToRgb[2][2] * z;
    r = clamp_unit(linear_to_srgb(rl), stats);
    g = clamp_unit(linear_to_srgb(gl), stats);
    b = clamp_unit(linear_to_srgb(bl), stats);
}

}  // namespace

std::string space_name(Space s) {
    switch (s) {
        case Space::Rgb: return "rgb";
        case Space::Hsv: return "hsv";
        case Space::Xyz: return "xyz";
        case Space::Lab: return "lab";
        case Space::Yuv: return "yuv";
        case Space::Yiq: return "yiq";
    }
    return "?";
}

std::optional<Space> space_from_name(const std::string& name) {
    if (name == "rgb") return Space::Rgb;
    if (name == "hsv") return Space::Hsv;
    if (name == "xyz") return Space::Xyz;
    if (name == "lab") return Space::Lab;
    if (name == "yuv") return Space::Yuv;
    if (name == "yiq") return Space::Yiq;
    return std::nullopt;
}

ColorPlanes rgb_planes(const RasterImage& img) {
    ColorPlanes out;
    out.space = Space::Rgb;
    out.c0 = FloatPlane(img.width, img.height);
    out.c1 = FloatPlane(img.width, img.height);
    out.c2 = FloatPlane(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (img.channels == 3) {
            out.c0.data[i] = img.data[i * 3 + 0] / 255.0;
            out.c1.data[i] = img.data[i * 3 + 1] / 255.0;
            out.c2.data[i] = img.data[i * 3 + 2] / 255.0;
        } else {
            const double v = img.data[i] / 255.0;
            out.c0.data[i] = v;
            out.c1.data[i] = v;
            out.c2.data[i] = v;
        }
    }
    return out;
}

ColorPlanes rgb_to_hsv(const ColorPlanes& rgb) {
    require_space(rgb, Space::Rgb, "rgb_to_hsv");
    return map_planes(rgb, Space::Hsv,
                      [](double r, double g, double b, double& h, double& s, double& v) {
                          const double mx = std::max(r, std::max(g, b));
                          const double mn = std::min(r, std::min(g, b));
                          const double delta = mx - mn;
                          v = mx;
                          s = mx > 0.0 ? delta / mx : 0.0;
                          if (delta == 0.0) {
                              h = 0.0;  // achromatic, hue 0 by convention
                              return;
                          }
                          double sector;
                          if (mx == r) {
                              sector = (g - b) / delta;
                              if (sector < 0.0) sector += 6.0;
                          } else if (mx == g) {
                              sector = (b - r) / delta + 2.0;
                          } else {
                              sector = (r - g) / delta + 4.0;
                          }
                          h = sector / 6.0;
                          if (h >= 1.0) h -= 1.0;
                      });
}

ColorPlanes hsv_to_rgb(const ColorPlanes& hsv) {
    require_space(hsv, Space::Hsv, "hsv_to_rgb");
    return map_planes(hsv, Space::Rgb,
                      [](double h, double s, double v, double& r, double& g, double& b) {
                          if (s <= 0.0) {
                              r = g = b = v;
                              return;
                          }
                          double sector = h * 6.0;
                          if (sector >= 6.0) sector -= 6.0;
                          const int i = static_cast<int>(sector);
                          const double f = sector - i;
                          const double p = v * (1.0 - s);
                          const double q = v * (1.0 - s * f);
                          const double t = v * (1.0 - s * (1.0 - f));
                          switch (i) {
                              case 0: r = v; g = t; b = p; break;
                              case 1: r = q; g = v; b = p; break;
                              case 2: r = p; g = v; b = t; break;
                              case 3: r = p; g = q; b = v; break;
                              case 4: r = t; g = p; b = v; break;
                              default: r = v; g = p; b = q; break;
                          }
                      });
}

ColorPlanes rgb_to_xyz(const ColorPlanes& rgb) {
    require_space(rgb, Space::Rgb, "rgb_to_xyz");
    return map_planes(rgb, Space::Xyz,
                      [](double r, double g, double b, double& x, double& y, double& z) {
                          xyz_of_rgb(r, g, b, x, y, z);
                      });
}

ColorPlanes xyz_to_rgb(const ColorPlanes& xyz, GamutStats* stats) {
    require_space(xyz, Space::Xyz, "xyz_to_rgb");
    return map_planes(xyz, Space::Rgb,
                      [stats](double x, double y, double z, double& r, double& g, double& b) {
                          rgb_of_xyz(x, y, z, stats, r, g, b);
                      });
}

ColorPlanes rgb_to_lab(const ColorPlanes& rgb) {
    require_space(rgb, Space::Rgb, "rgb_to_lab");
    return map_planes(rgb, Space::Lab,
                      [](double r, double g, double b, double& l, double& a, double& bb) {
                          double x, y, z;
                          xyz_of_rgb(r, g, b, x, y, z);
                          const double fx = lab_f(x / kWhiteX);
                          const double fy = lab_f(y / kWhiteY);
                          const double fz = lab_f(z / kWhiteZ);
                          l = 116.0 * fy - 16.0;
                          a = 500.0 * (fx - fy);
                          bb = 200.0 * (fy - fz);
                      });
}

ColorPlanes lab_to_rgb(const ColorPlanes& lab, GamutStats* stats) {
    require_space(lab, Space::Lab, "lab_to_rgb");
    return map_planes(lab, Space::Rgb,
                      [stats](double l, double a, double bb, double& r, double& g, double& b) {
                          const double fy = (l + 16.0) / 116.0;
                          const double fx = fy + a / 500.0;
                          const double fz = fy - bb / 200.0;
                          const double x = kWhiteX * lab_f_inv(fx);
                          const double y = kWhiteY * lab_f_inv(fy);
                          const double z = kWhiteZ * lab_f_inv(fz);
                          rgb_of_xyz(x, y, z, stats, r, g, b);
                      });
}

ColorPlanes rgb_to_yuv(const ColorPlanes& rgb) {
    require_space(rgb, Space::Rgb, "rgb_to_yuv");
    // Chroma in channel-difference form: b - y = 0.299(b-r) + 0.587(b-g),
    // so achromatic inputs give exactly zero U and V.
    return map_planes(rgb, Space::Yuv,
                      [](double r, double g, double b, double& y, double& u, double& v) {
                          y = kLumaR * r + kLumaG * g + kLumaB * b;
                          u = kUScale * (kLumaR * (b - r) + kLumaG * (b - g));
                          v = kVScale * (kLumaG * (r - g) + kLumaB * (r - b));
                      });
}

ColorPlanes yuv_to_rgb(const ColorPlanes& yuv, GamutStats* stats) {
    require_space(yuv, Space::Yuv, "yuv_to_rgb");
    return map_planes(yuv, Space::Rgb,
                      [stats](double y, double u, double v, double& r, double& g, double& b) {
                          const double rr = y + v / kVScale;
                          const double bb = y + u / kUScale;
                          const double gg = (y - kLumaR * rr - kLumaB * bb) / kLumaG;
                          r = clamp_unit(rr, stats);
                          g = clamp_unit(gg, stats);
                          b = clamp_unit(bb, stats);
                      });
}

ColorPlanes rgb_to_yiq(const ColorPlanes& rgb) {
    require_space(rgb, Space::Rgb, "rgb_to_yiq");
    // Same difference decomposition as YUV; the chroma rows sum to zero, so
    // 0.5959 r - 0.2746 g - 0.3213 b == 0.2746 (r-g) + 0.3213 (r-b) etc.
    return map_planes(rgb, Space::Yiq,
                      [](double r, double g, double b, double& y, double& i, double& q) {
                          y = kRgbToYiq[0][0] * r + kRgbToYiq[0][1] * g + kRgbToYiq[0][2] * b;
                          i = 0.2746 * (r - g) + 0.3213 * (r - b);
                          q = 0.2115 * (r - g) + 0.3112 * (b - g);
                      });
}

ColorPlanes yiq_to_rgb(const ColorPlanes& yiq, GamutStats* stats) {
    require_space(yiq, Space::Yiq, "yiq_to_rgb");
    return map_planes(yiq, Space::Rgb,
                      [stats](double y, double i, double q, double& r, double& g, double& b) {
                          r = clamp_unit(
                              kYiqToRgb[0][0] * y + kYiqToRgb[0][1] * i + kYiqToRgb[0][2] * q,
                              stats);
                          g = clamp_unit(
                              kYiqToRgb[1][0] * y + kYiqToRgb[1][1] * i + kYiqToRgb[1][2] * q,
                              stats);
                          b = clamp_unit(
                              kYiqToRgb[2][0] * y + kYiqToRgb[2][1] * i + kYiqToRgb[2][2] * q,
                              stats);
                      });
}

ColorPlanes convert_from_rgb(const ColorPlanes& rgb, Space to) {
    switch (to) {
        case Space::Rgb: require_space(rgb, Space::Rgb, "convert_from_rgb"); return rgb;
        case Space::Hsv: return rgb_to_hsv(rgb);
        case Space::Xyz: return rgb_to_xyz(rgb);
        case Space::Lab: return rgb_to_lab(rgb);
        case Space::Yuv: return rgb_to_yuv(rgb);
        case Space::Yiq: return rgb_to_yiq(rgb);
    }
    throw std::invalid_argument("convert_from_rgb: unknown space");
}

ColorPlanes convert_to_rgb(const ColorPlanes& planes, GamutStats* stats) {
    switch (planes.space) {
        case Space::Rgb: return planes;
        case Space::Hsv: return hsv_to_rgb(planes);
        case Space::Xyz: return xyz_to_rgb(planes, stats);
        case Space::Lab: return lab_to_rgb(planes, stats);
        case Space::Yuv: return yuv_to_rgb(planes, stats);
        case Space::Yiq: return yiq_to_rgb(planes, stats);
    }
    throw std::invalid_argument("convert_to_rgb: unknown space");
}

ComponentRange component_range(Space space, int component) {
    switch (space) {
        case Space::Rgb:
        case Space::Hsv:
            return {0.0, 1.0};
        case Space::Xyz:
            return {0.0, 1.0891};
        case Space::Lab:
            return component == 0 ? ComponentRange{0.0, 100.0} : ComponentRange{-128.0, 127.0};
        case Space::Yuv:
            if (component == 0) return {0.0, 1.0};
            return component == 1 ? ComponentRange{-0.436, 0.436}
                                  : ComponentRange{-0.615, 0.615};
        case Space::Yiq:
            if (component == 0) return {0.0, 1.0};
            return component == 1 ? ComponentRange{-0.5957, 0.5957}
                                  : ComponentRange{-0.5226, 0.5226};
    }
    throw std::invalid_argument("component_range: unknown space");
}

RasterImage planes_to_raster(const ColorPlanes& planes) {
    require_dims(planes, "planes_to_raster");
    RasterImage out(planes.width(), planes.height(), 3);
    const FloatPlane* comps[3] = {&planes.c0, &planes.c1, &planes.c2};
    for (int c = 0; c < 3; ++c) {
        const ComponentRange range = component_range(planes.space, c);
        const double span = range.hi - range.lo;
        const std::size_t n = comps[c]->data.size();
        for (std::size_t i = 0; i < n; ++i) {
            // Normalize before scaling so midpoints of symmetric ranges land
            // exactly on 127.5.
            out.data[i * 3 + c] = round_to_u8((comps[c]->data[i] - range.lo) / span * 255.0);
        }
    }
    return out;
}

ColorPlanes raster_to_planes(const RasterImage& img, Space space) {
    ColorPlanes out;
    out.space = space;
    out.c0 = FloatPlane(img.width, img.height);
    out.c1 = FloatPlane(img.width, img.height);
    out.c2 = FloatPlane(img.width, img.height);
    FloatPlane* comps[3] = {&out.c0, &out.c1, &out.c2};
    const std::size_t n = img.pixel_count();
    for (int c = 0; c < 3; ++c) {
        const ComponentRange range = component_range(space, c);
        const double span = range.hi - range.lo;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t byte =
                img.channels == 3 ? img.data[i * 3 + c] : img.data[i];
            comps[c]->data[i] = range.lo + byte / 255.0 * span;
        }
    }
    return out;
}

}  // namespace claritas
