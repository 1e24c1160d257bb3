#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "ctetris/field.hpp"

namespace ctetris {

namespace detail {

// Skips PGM whitespace and '#' comment lines, then parses one integer token.
inline long pgm_next_int(std::istream& in) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) throw std::runtime_error("PGM: unexpected end of header");
    long v = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any) throw std::runtime_error("PGM: malformed integer in header");
    return v;
}

inline Image load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw std::runtime_error("PGM: unsupported magic in " + path);
    bool binary = magic[1] == '5';
    long w = pgm_next_int(in);
    long h = pgm_next_int(in);
    long maxval = pgm_next_int(in);
    if (w < 1 || h < 1) throw std::runtime_error("PGM: zero-sized image: " + path);
    if (maxval < 1 || maxval > 65535)
        throw std::runtime_error("PGM: unsupported maxval " + std::to_string(maxval));

    Image img(static_cast<int>(w), static_cast<int>(h));
    img.normalized = true;
    const double scale = 1.0 / static_cast<double>(maxval);
    const size_t n = img.size();
    if (binary) {
        if (maxval < 256) {
            std::vector<uint8_t> raw(n);
            in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
            if (static_cast<size_t>(in.gcount()) != n)
                throw std::runtime_error("PGM: truncated pixel data: " + path);
            for (size_t k = 0; k < n; ++k) img.data[k] = raw[k] * scale;
        } else {
            // 16-bit P5 is big-endian per the Netpbm spec.
            std::vector<uint8_t> raw(2 * n);
            in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(2 * n));
            if (static_cast<size_t>(in.gcount()) != 2 * n)
                throw std::runtime_error("PGM: truncated pixel data: " + path);
            for (size_t k = 0; k < n; ++k)
                img.data[k] = ((raw[2 * k] << 8) | raw[2 * k + 1]) * scale;
        }
    } else {
        for (size_t k = 0; k < n; ++k) {
            long v = pgm_next_int(in);
            if (v < 0 || v > maxval) throw std::runtime_error("PGM: sample out of range");
            img.data[k] = v * scale;
        }
    }
    return img;
}

inline void save_pgm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image file: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<uint8_t> raw(img.size());
    for (size_t k = 0; k < img.size(); ++k) {
        double v = std::clamp(img.data[k], 0.0, 1.0);
        raw[k] = static_cast<uint8_t>(std::lround(255.0 * v));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("short write on image file: " + path);
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

inline Image load_png(const std::string& path) {
    PngReadCloser c;
    c.fp = std::fopen(path.c_str(), "rb");
    if (!c.fp) throw std::runtime_error("cannot open image file: " + path);
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw std::runtime_error("PNG: allocation failure");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw std::runtime_error("PNG: allocation failure");
    if (setjmp(png_jmpbuf(c.png))) throw std::runtime_error("PNG: failed to decode " + path);

    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);

    png_uint_32 w = png_get_image_width(c.png, c.info);
    png_uint_32 h = png_get_image_height(c.png, c.info);
    int depth = png_get_bit_depth(c.png, c.info);
    int color = png_get_color_type(c.png, c.info);
    if (w < 1 || h < 1) throw std::runtime_error("PNG: zero-sized image: " + path);
    if (depth > 16) throw std::runtime_error("PNG: unsupported bit depth");

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(c.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(c.png);
    if (png_get_valid(c.png, c.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(c.png);
    png_set_strip_alpha(c.png);
    png_read_update_info(c.png, c.info);

    depth = png_get_bit_depth(c.png, c.info);
    color = png_get_color_type(c.png, c.info);
    int channels = png_get_channels(c.png, c.info);
    size_t rowbytes = png_get_rowbytes(c.png, c.info);

    std::vector<uint8_t> buf(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 i = 0; i < h; ++i) rows[i] = buf.data() + i * rowbytes;
    png_read_image(c.png, rows.data());

    Image img(static_cast<int>(w), static_cast<int>(h));
    img.normalized = true;
    const double maxval = depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 i = 0; i < h; ++i) {
        const uint8_t* row = rows[i];
        for (png_uint_32 j = 0; j < w; ++j) {
            double px[4] = {0, 0, 0, 0};
            for (int ch = 0; ch < channels; ++ch) {
                size_t off = (static_cast<size_t>(j) * channels + ch) * (depth / 8);
                // PNG multi-byte samples are big-endian.
                px[ch] = depth == 16 ? (row[off] << 8) | row[off + 1] : row[off];
            }
            double v;
            if (channels >= 3)
                v = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
            else
                v = px[0];
            img.at(static_cast<int>(i), static_cast<int>(j)) = v / maxval;
        }
    }
    return img;
}

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

inline void save_png(const Image& img, const std::string& path) {
    PngWriteCloser c;
    c.fp = std::fopen(path.c_str(), "wb");
    if (!c.fp) throw std::runtime_error("cannot write image file: " + path);
    c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!c.png) throw std::runtime_error("PNG: allocation failure");
    c.info = png_create_info_struct(c.png);
    if (!c.info) throw std::runtime_error("PNG: allocation failure");
    if (setjmp(png_jmpbuf(c.png))) throw std::runtime_error("PNG: failed to encode " + path);

    png_init_io(c.png, c.fp);
    png_set_IHDR(c.png, c.info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(c.png, c.info);

    std::vector<uint8_t> row(img.width);
    for (int i = 0; i < img.height; ++i) {
        for (int j = 0; j < img.width; ++j) {
            double v = std::clamp(img.at(i, j), 0.0, 1.0);
            row[j] = static_cast<uint8_t>(std::lround(255.0 * v));
        }
        png_write_row(c.png, row.data());
    }
    png_write_end(c.png, nullptr);
}

inline bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() &&
           std::equal(suf.rbegin(), suf.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

}  // namespace detail

// Loads a PGM (P2/P5) or PNG image and scales samples to [0,1] by the
// format's max value. RGB input is converted by Rec.601 luminance.
inline Image load_image(const std::string& path) {
    if (detail::has_suffix(path, ".png")) return detail::load_png(path);
    return detail::load_pgm(path);
}

// Writes 8-bit grayscale (PGM P5 unless the path ends in .png); sample
// values map as round(255*v).
inline void save_image(const Image& img, const std::string& path) {
    if (!all_finite(img)) throw std::invalid_argument("save_image: non-finite values");
    if (detail::has_suffix(path, ".png"))
        detail::save_png(img, path);
    else
        detail::save_pgm(img, path);
}

// Raw float64 grid: 16-byte header of two little-endian uint64 dims
// (width, height) followed by row-major little-endian doubles. Used for
// lossless texture dumps, where values can be negative.
inline void save_grid(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write grid file: " + path);
    uint64_t dims[2] = {static_cast<uint64_t>(f.width), static_cast<uint64_t>(f.height)};
    out.write(reinterpret_cast<const char*>(dims), 16);
    out.write(reinterpret_cast<const char*>(f.data.data()),
              static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write on grid file: " + path);
}

inline Field load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    uint64_t dims[2];
    in.read(reinterpret_cast<char*>(dims), 16);
    if (in.gcount() != 16) throw std::runtime_error("grid file: truncated header");
    if (dims[0] < 1 || dims[1] < 1 || dims[0] > (1u << 20) || dims[1] > (1u << 20))
        throw std::runtime_error("grid file: implausible dimensions");
    Field f(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
    in.read(reinterpret_cast<char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != f.data.size() * sizeof(double))
        throw std::runtime_error("grid file: truncated data");
    return f;
}

}  // namespace ctetris
