#include "claritas/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "claritas/error.hpp"

namespace claritas {

namespace {

constexpr std::size_t kMaxDimension = 1 << 20;       // per-axis sanity limit
constexpr std::size_t kMaxBytes = std::size_t{1} << 31;

// ---------------------------------------------------------------------------
// NetPBM (P5 grayscale / P6 RGB, binary, maxval 255)
// ---------------------------------------------------------------------------

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    while (ch != EOF && !std::isspace(ch)) {
        tok.push_back(static_cast<char>(ch));
        ch = in.get();
    }
    return tok;
}

long pnm_int(std::istream& in, const char* field) {
    const std::string tok = pnm_token(in);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw CorruptData(std::string("NetPBM header: bad ") + field);
    }
    return std::stol(tok);
}

RasterImage load_pnm(std::istream& in, int channels) {
    const long w = pnm_int(in, "width");
    const long h = pnm_int(in, "height");
    const long maxval = pnm_int(in, "maxval");
    if (w < 1 || h < 1 || static_cast<std::size_t>(w) > kMaxDimension ||
        static_cast<std::size_t>(h) > kMaxDimension ||
        static_cast<std::size_t>(w) * h * channels > kMaxBytes) {
        throw CorruptData("NetPBM header: unreasonable dimensions");
    }
    if (maxval != 255) {
        throw UnsupportedFormat("NetPBM: only maxval 255 is supported");
    }
    // Header ends with exactly one whitespace byte, already consumed by
    // pnm_token's trailing-delimiter read.
    RasterImage img(static_cast<int>(w), static_cast<int>(h), channels);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
        throw CorruptData("NetPBM payload shorter than header dimensions");
    }
    return img;
}

void save_pnm(const RasterImage& img, const std::filesystem::path& path, int channels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());

    RasterImage promoted;
    const RasterImage* src = &img;
    if (channels == 3 && img.channels == 1) {
        promoted = RasterImage(img.width, img.height, 3);
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            promoted.data[i * 3 + 0] = img.data[i];
            promoted.data[i * 3 + 1] = img.data[i];
            promoted.data[i * 3 + 2] = img.data[i];
        }
        src = &promoted;
    }

    out << (channels == 1 ? "P5" : "P6") << '\n'
        << img.width << ' ' << img.height << '\n'
        << "255\n";
    out.write(reinterpret_cast<const char*>(src->data.data()),
              static_cast<std::streamsize>(src->data.size()));
    if (!out) throw IoFailure("short write: " + path.string());
}

// ---------------------------------------------------------------------------
// PNG via libpng
// ---------------------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RasterImage load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw FileNotFound("cannot open: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoFailure("libpng initialization failed");
    }
    RasterImage img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptData("PNG decode failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int type = png_get_color_type(png, info);
    if (depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat("PNG: 16-bit depth not supported");
    }
    if (w < 1 || h < 1 || static_cast<std::size_t>(w) * h * 3 > kMaxBytes) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw CorruptData("PNG header: unreasonable dimensions");
    }

    if (type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat("PNG: unsupported channel layout");
    }

    img = RasterImage(static_cast<int>(w), static_cast<int>(h), channels);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = img.data.data() + static_cast<std::size_t>(y) * w * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoFailure("cannot open for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("libpng initialization failed");
    }
    std::vector<png_bytep> rows(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoFailure("PNG encode failed: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.data.data()) +
                  static_cast<std::size_t>(y) * img.width * img.channels;
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fflush(fp.get()) != 0) throw IoFailure("short write: " + path.string());
}

// ---------------------------------------------------------------------------
// JPEG via libjpeg (decode only)
// ---------------------------------------------------------------------------

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

RasterImage load_jpeg(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw FileNotFound("cannot open: " + path.string());

    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw CorruptData("JPEG decode failed: " + path.string());
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int channels = cinfo.output_components == 1 ? 1 : 3;
    RasterImage img(static_cast<int>(cinfo.output_width),
                    static_cast<int>(cinfo.output_height), channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.data.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * img.width * channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open: " + path.string());

    unsigned char magic[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(magic), 4);
    in.clear();
    in.seekg(0);

    if (magic[0] == 'P' && magic[1] == '5') {
        in.ignore(2);
        return load_pnm(in, 1);
    }
    if (magic[0] == 'P' && magic[1] == '6') {
        in.ignore(2);
        return load_pnm(in, 3);
    }
    in.close();
    if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
        return load_png(path);
    }
    if (magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
        return load_jpeg(path);
    }
    throw UnsupportedFormat("unrecognized image format: " + path.string());
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".pgm") {
        if (img.channels != 1) {
            throw UnsupportedFormat("P5 is grayscale-only; cannot save a 3-channel image");
        }
        save_pnm(img, path, 1);
    } else if (ext == ".ppm") {
        save_pnm(img, path, 3);
    } else if (ext == ".png") {
        save_png(img, path);
    } else if (ext == ".jpg" || ext == ".jpeg") {
        throw UnsupportedFormat("JPEG output is not supported (decode only)");
    } else {
        throw UnsupportedFormat("unsupported output extension: " + path.string());
    }
}

}  // namespace claritas
