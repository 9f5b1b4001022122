#ifndef CLARITAS_NUMERIC_HPP
#define CLARITAS_NUMERIC_HPP

#include <cmath>
#include <cstdint>

namespace claritas {

/// Rounding rule used everywhere in this project: halfway cases round away
/// from zero (std::lround semantics, independent of the FP rounding mode).
inline long round_half_away(double v) {
    return std::lround(v);
}

/// Round and clamp to the 8-bit intensity range.
inline std::uint8_t round_to_u8(double v) {
    long r = round_half_away(v);
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<std::uint8_t>(r);
}

}  // namespace claritas

#endif  // CLARITAS_NUMERIC_HPP
