#pragma once

// Forward image warping: every source pixel carries its intensity to
// p + u(p); the scattered result is resampled to the uniform target grid by
// rasterizing the deformed source mesh (each grid quad split into two
// triangles, barycentric-linear interpolation inside). Target pixels not
// covered by any triangle are filled from the nearest covered sample.

#include <cmath>
#include <queue>
#include <vector>

#include "common.hpp"

namespace dicfield {

struct WarpResult {
    GrayImage image;
    bool fold_detected = false;  // some deformed cell has non-positive Jacobian
};

inline WarpResult warp_image(const GrayImage& ref, const DisplacementField& disp) {
    if (!ref.same_shape(disp.u) || !ref.same_shape(disp.v))
        throw InputError("displacement planes must match the reference image shape");

    const int w = ref.width, h = ref.height;
    WarpResult out;
    out.image = GrayImage(w, h, 0.f);
    std::vector<uint8_t> covered(static_cast<size_t>(w) * h, 0);

    auto dx = [&](int x, int y) { return x + static_cast<double>(disp.u.at(x, y)); };
    auto dy = [&](int x, int y) { return y + static_cast<double>(disp.v.at(x, y)); };

    constexpr double kEps = 1e-12;
    constexpr double kInsideTol = 1e-9;

    auto raster_triangle = [&](double x0, double y0, float v0, double x1, double y1, float v1, double x2, double y2,
                               float v2) {
        // source triangles are positively oriented; a sign flip means folding
        double area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
        if (area <= 0) out.fold_detected = true;
        if (std::fabs(area) < kEps) return;  // degenerate, nothing to rasterize
        int bx0 = std::max(0, static_cast<int>(std::ceil(std::min({x0, x1, x2}) - kInsideTol)));
        int bx1 = std::min(w - 1, static_cast<int>(std::floor(std::max({x0, x1, x2}) + kInsideTol)));
        int by0 = std::max(0, static_cast<int>(std::ceil(std::min({y0, y1, y2}) - kInsideTol)));
        int by1 = std::min(h - 1, static_cast<int>(std::floor(std::max({y0, y1, y2}) + kInsideTol)));
        double inv_area = 1.0 / area;
        for (int py = by0; py <= by1; ++py) {
            for (int px = bx0; px <= bx1; ++px) {
                double w0 = ((x1 - px) * (y2 - py) - (x2 - px) * (y1 - py)) * inv_area;
                double w1 = ((x2 - px) * (y0 - py) - (x0 - px) * (y2 - py)) * inv_area;
                double w2 = 1.0 - w0 - w1;
                if (w0 < -kInsideTol || w1 < -kInsideTol || w2 < -kInsideTol) continue;
                out.image.at(px, py) = static_cast<float>(w0 * v0 + w1 * v1 + w2 * v2);
                covered[static_cast<size_t>(py) * w + px] = 1;
            }
        }
    };

    for (int y = 0; y + 1 < h; ++y) {
        for (int x = 0; x + 1 < w; ++x) {
            double ax = dx(x, y), ay = dy(x, y);
            double bx = dx(x + 1, y), by = dy(x + 1, y);
            double cx = dx(x, y + 1), cy = dy(x, y + 1);
            double ex = dx(x + 1, y + 1), ey = dy(x + 1, y + 1);
            float va = ref.at(x, y), vb = ref.at(x + 1, y), vc = ref.at(x, y + 1), ve = ref.at(x + 1, y + 1);
            raster_triangle(ax, ay, va, bx, by, vb, cx, cy, vc);
            raster_triangle(bx, by, vb, ex, ey, ve, cx, cy, vc);
        }
    }

    // breadth-first fill: uncovered target pixels take the value of the
    // nearest (in hop distance) covered sample
    std::queue<int> frontier;
    for (int i = 0; i < w * h; ++i)
        if (covered[static_cast<size_t>(i)]) frontier.push(i);
    if (frontier.empty()) return out;  // nothing landed in frame
    const int nbr_dx[4] = {1, -1, 0, 0};
    const int nbr_dy[4] = {0, 0, 1, -1};
    while (!frontier.empty()) {
        int i = frontier.front();
        frontier.pop();
        int x = i % w, y = i / w;
        for (int k = 0; k < 4; ++k) {
            int nx = x + nbr_dx[k], ny = y + nbr_dy[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            size_t ni = static_cast<size_t>(ny) * w + nx;
            if (covered[ni]) continue;
            covered[ni] = 1;
            out.image.at(nx, ny) = out.image.at(x, y);
            frontier.push(static_cast<int>(ni));
        }
    }
    return out;
}

// Uniform sub-pixel shift by backward bilinear sampling: out(p) = img(p - t).
inline GrayImage shift_image_bilinear(const GrayImage& img, double shift_x, double shift_y) {
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(x, y) = img.sample_bilinear(x - shift_x, y - shift_y);
    return out;
}

}  // namespace dicfield
