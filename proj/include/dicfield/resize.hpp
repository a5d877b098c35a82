#pragma once

// Bilinear plane resize (half-pixel-center convention) and the
// nearest-multiple-of-32 shape rule used by the network input contract.

#include <cmath>

#include "common.hpp"

namespace dicfield {

// Nearest multiple of 32, ties rounding up, floor at 32.
inline int nearest_multiple_of_32(int d) {
    int m = static_cast<int>(std::floor(d / 32.0 + 0.5)) * 32;
    return std::max(32, m);
}

inline Plane resize_bilinear(const Plane& src, int dst_w, int dst_h) {
    if (dst_w <= 0 || dst_h <= 0) throw InputError("resize target must be positive");
    if (src.width == dst_w && src.height == dst_h) return src;
    Plane dst(dst_w, dst_h);
    double sx = static_cast<double>(src.width) / dst_w;
    double sy = static_cast<double>(src.height) / dst_h;
    for (int y = 0; y < dst_h; ++y) {
        double src_y = (y + 0.5) * sy - 0.5;
        for (int x = 0; x < dst_w; ++x) {
            double src_x = (x + 0.5) * sx - 0.5;
            dst.at(x, y) = src.sample_bilinear(src_x, src_y);
        }
    }
    return dst;
}

// 2x2 block-mean downsample; both input dims must be even.
inline Plane downsample2x_mean(const Plane& src) {
    if (src.width % 2 || src.height % 2) throw InputError("downsample2x requires even dimensions");
    Plane dst(src.width / 2, src.height / 2);
    for (int y = 0; y < dst.height; ++y)
        for (int x = 0; x < dst.width; ++x)
            dst.at(x, y) = 0.25f * (src.at(2 * x, 2 * y) + src.at(2 * x + 1, 2 * y) + src.at(2 * x, 2 * y + 1) +
                                    src.at(2 * x + 1, 2 * y + 1));
    return dst;
}

inline Plane crop(const Plane& src, int x0, int y0, int w, int h) {
    if (x0 < 0 || y0 < 0 || x0 + w > src.width || y0 + h > src.height) throw InputError("crop out of bounds");
    Plane dst(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) dst.at(x, y) = src.at(x0 + x, y0 + y);
    return dst;
}

}  // namespace dicfield
