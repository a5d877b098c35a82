#pragma once

// 8-bit grayscale PNG import/export (libpng). Export quantizes with
// round(clamp(p, 0, 1) * 255); import maps back to v / 255.

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

#include "common.hpp"

namespace dicfield {

namespace detail {
struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
}  // namespace detail

inline void write_png_gray8(const std::filesystem::path& path, const GrayImage& img) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw DataError("cannot open for write: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("libpng write error: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    // fixed compressor settings keep output byte-stable run to run
    png_set_compression_level(png, 6);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<size_t>(img.width));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            row[static_cast<size_t>(x)] = static_cast<png_byte>(std::lround(clamp01(img.at(x, y)) * 255.0f));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

inline GrayImage read_png_gray8(const std::filesystem::path& path) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw DataError("cannot open: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("libpng read error: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);

    // normalize whatever we get to 8-bit gray
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (depth == 16) png_set_strip_16(png);
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    std::vector<png_byte> row(w);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) img.at(static_cast<int>(x), static_cast<int>(y)) = row[x] / 255.0f;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

// RGB8 raster for colormapped exports (error maps, plot rasters).
struct RgbImage {
    int width = 0, height = 0;
    std::vector<unsigned char> v;  // 3 bytes per pixel, row-major
    RgbImage() = default;
    RgbImage(int w, int h, unsigned char r = 255, unsigned char g = 255, unsigned char b = 255)
        : width(w), height(h), v(static_cast<size_t>(w) * h * 3) {
        for (size_t i = 0; i < v.size(); i += 3) {
            v[i] = r;
            v[i + 1] = g;
            v[i + 2] = b;
        }
    }
    void set(int x, int y, unsigned char r, unsigned char g, unsigned char b) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        size_t i = (static_cast<size_t>(y) * width + x) * 3;
        v[i] = r;
        v[i + 1] = g;
        v[i + 2] = b;
    }
};

inline void write_png_rgb8(const std::filesystem::path& path, const RgbImage& img) {
    detail::FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw DataError("cannot open for write: " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("libpng write error: " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(img.v.data() + static_cast<size_t>(y) * img.width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace dicfield
