#ifndef CLARITAS_IMAGE_IO_HPP
#define CLARITAS_IMAGE_IO_HPP

#include <filesystem>

#include "claritas/image.hpp"

namespace claritas {

/**
 * @brief Decode an image file.
 *
 * Format is detected from the file signature: NetPBM P5/P6 (binary,
 * maxval 255), PNG (8-bit gray or RGB; palette images are expanded, alpha
 * is dropped) and JPEG (decode only). NetPBM and PNG are lossless: pixel
 * values come back exactly as stored.
 *
 * Throws FileNotFound, UnsupportedFormat or CorruptData.
 */
RasterImage load_image(const std::filesystem::path& path);

/**
 * @brief Encode an image file; format chosen by extension.
 *
 * .pgm writes P5 (grayscale only; a 3-channel image is rejected),
 * .ppm writes P6 (a 1-channel image is promoted to R=G=B triplets),
 * .png writes 8-bit gray or RGB. JPEG output is not supported.
 * NetPBM and PNG round-trip bit-exactly through load_image.
 *
 * Throws UnsupportedFormat or IoFailure.
 */
void save_image(const RasterImage& img, const std::filesystem::path& path);

}  // namespace claritas

#endif  // CLARITAS_IMAGE_IO_HPP
