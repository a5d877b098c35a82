#pragma once

// Analytic deformation fields: random parameter sampling, displacement
// evaluation (rigid motion + uniform stretch/shear + localized Gaussian
// bumps), and the closed-form infinitesimal strain ground truth.
//
// Conventions:
//  - Spatial coordinates are taken relative to the 512-frame center
//    c = (frame_size - 1) / 2; the random crop later shifts the effective
//    rotation/stretch center.
//  - Gaussian bump centers/sigmas are stored normalized ([0,1] of the frame);
//    amplitudes are normalized and scaled by amp_scale pixels at evaluation.
//  - Displacement planes are expressed in pixels of the grid they are
//    evaluated on (frame-pixel values divided by the grid spacing).

#include <array>
#include <cmath>
#include <vector>

#include "common.hpp"

namespace dicfield {

struct GaussianBlob {
    double amplitude = 0;  // normalized, in [0.003, 0.6]
    double cx = 0.5, cy = 0.5;  // normalized center in [0,1], mapped to [0, F-1]
    double sx = 0.1, sy = 0.1;  // normalized widths in [0.06, 0.5], mapped to sx * F pixels
};

struct DeformationParams {
    double tx = 0, ty = 0;      // translation, pixels in [-4, 4]
    double theta = 0;           // rotation, radians in [-0.01, 0.01]
    double kx = 1, ky = 1;      // stretch in [0.96, 1.04]
    double gx = 0, gy = 0;      // shear in [-0.03, 0.03]
    int blob_count = 0;         // N in {1, 2}; shared by the x and y sums
    std::vector<GaussianBlob> x_blobs;  // bumps feeding the u component
    std::vector<GaussianBlob> y_blobs;  // bumps feeding the v component

    static DeformationParams identity() { return DeformationParams{}; }
};

namespace field_ranges {
inline constexpr double kTransMax = 4.0;
inline constexpr double kThetaMax = 0.01;
inline constexpr double kStretchMin = 0.96, kStretchMax = 1.04;
inline constexpr double kShearMax = 0.03;
inline constexpr double kAmpMin = 0.003, kAmpMax = 0.6;
inline constexpr double kSigmaMin = 0.06, kSigmaMax = 0.5;
}  // namespace field_ranges

inline GaussianBlob sample_blob(Rng& rng) {
    using namespace field_ranges;
    GaussianBlob b;
    b.amplitude = rng.uniform(kAmpMin, kAmpMax);
    b.cx = rng.uniform();
    b.cy = rng.uniform();
    b.sx = rng.uniform(kSigmaMin, kSigmaMax);
    b.sy = rng.uniform(kSigmaMin, kSigmaMax);
    return b;
}

inline DeformationParams sample_deformation(Rng& rng) {
    using namespace field_ranges;
    DeformationParams p;
    p.tx = rng.uniform(-kTransMax, kTransMax);
    p.ty = rng.uniform(-kTransMax, kTransMax);
    p.theta = rng.uniform(-kThetaMax, kThetaMax);
    p.kx = rng.uniform(kStretchMin, kStretchMax);
    p.ky = rng.uniform(kStretchMin, kStretchMax);
    p.gx = rng.uniform(-kShearMax, kShearMax);
    p.gy = rng.uniform(-kShearMax, kShearMax);
    p.blob_count = static_cast<int>(rng.uniform_int(1, 2));
    for (int i = 0; i < p.blob_count; ++i) p.x_blobs.push_back(sample_blob(rng));
    for (int i = 0; i < p.blob_count; ++i) p.y_blobs.push_back(sample_blob(rng));
    return p;
}

// Frame geometry + the amplitude calibration constant (pixels of bump
// displacement per unit normalized amplitude).
struct FieldEvalContext {
    int frame_size = 512;
    double amp_scale = 16.0;

    double center() const { return (frame_size - 1) / 2.0; }
};

namespace detail {

struct BlobEval {
    double value = 0;   // bump displacement, frame pixels
    double d_dx = 0;    // spatial derivatives, dimensionless
    double d_dy = 0;
};

// Sum of 2D Gaussians at centered coordinates (x, y).
inline BlobEval eval_blob_sum(const std::vector<GaussianBlob>& blobs, double x, double y,
                              const FieldEvalContext& ctx) {
    BlobEval out;
    double c = ctx.center();
    for (const auto& b : blobs) {
        double bx = b.cx * (ctx.frame_size - 1) - c;
        double by = b.cy * (ctx.frame_size - 1) - c;
        double sx = b.sx * ctx.frame_size;
        double sy = b.sy * ctx.frame_size;
        double dx = (x - bx) / sx;
        double dy = (y - by) / sy;
        double g = b.amplitude * ctx.amp_scale * std::exp(-0.5 * dx * dx - 0.5 * dy * dy);
        out.value += g;
        out.d_dx += g * (-dx / sx);
        out.d_dy += g * (-dy / sy);
    }
    return out;
}

}  // namespace detail

// Displacement at a single point given in frame coordinates (pixels of the
// uncropped frame). Returns (u, v) in frame pixels.
inline void displacement_at(const DeformationParams& p, double frame_x, double frame_y,
                            const FieldEvalContext& ctx, double& u, double& v) {
    double c = ctx.center();
    double x = frame_x - c;
    double y = frame_y - c;

    detail::BlobEval gx_eval = detail::eval_blob_sum(p.x_blobs, x, y, ctx);
    detail::BlobEval gy_eval = detail::eval_blob_sum(p.y_blobs, x, y, ctx);

    // deformed position q = F p + g(p), then rotate about the origin and translate
    double qx = p.kx * x + p.gx * y + gx_eval.value;
    double qy = p.gy * x + p.ky * y + gy_eval.value;
    double ct = std::cos(p.theta), st = std::sin(p.theta);
    double px = ct * qx + st * qy + p.tx;
    double py = -st * qx + ct * qy + p.ty;
    u = px - x;
    v = py - y;
}

// Infinitesimal strain at a point; rigid rotation is excluded by definition.
inline void strain_at(const DeformationParams& p, double frame_x, double frame_y, const FieldEvalContext& ctx,
                      double& exx, double& eyy, double& exy) {
    double c = ctx.center();
    double x = frame_x - c;
    double y = frame_y - c;
    detail::BlobEval gx_eval = detail::eval_blob_sum(p.x_blobs, x, y, ctx);
    detail::BlobEval gy_eval = detail::eval_blob_sum(p.y_blobs, x, y, ctx);
    exx = (p.kx - 1.0) + gx_eval.d_dx;
    eyy = (p.ky - 1.0) + gy_eval.d_dy;
    exy = 0.5 * (p.gx + p.gy + gx_eval.d_dy + gy_eval.d_dx);
}

// Evaluate on a rectangular lattice. grid places plane pixel (i, j) at frame
// coordinates (x0 + j * spacing, y0 + i * spacing); returned u/v are divided
// by the spacing so they are expressed in pixels of that lattice.
inline DisplacementField displacement_field(const DeformationParams& p, int width, int height,
                                            const FieldGrid& grid = {}, const FieldEvalContext& ctx = {}) {
    DisplacementField f;
    f.grid = grid;
    f.u = Plane(width, height);
    f.v = Plane(width, height);
    for (int i = 0; i < height; ++i) {
        double fy = grid.y0 + i * grid.spacing;
        for (int j = 0; j < width; ++j) {
            double fx = grid.x0 + j * grid.spacing;
            double u, v;
            displacement_at(p, fx, fy, ctx, u, v);
            f.u.at(j, i) = static_cast<float>(u / grid.spacing);
            f.v.at(j, i) = static_cast<float>(v / grid.spacing);
        }
    }
    return f;
}

inline StrainField strain_field(const DeformationParams& p, int width, int height, const FieldGrid& grid = {},
                                const FieldEvalContext& ctx = {}) {
    StrainField f;
    f.grid = grid;
    f.exx = Plane(width, height);
    f.eyy = Plane(width, height);
    f.exy = Plane(width, height);
    for (int i = 0; i < height; ++i) {
        double fy = grid.y0 + i * grid.spacing;
        for (int j = 0; j < width; ++j) {
            double fx = grid.x0 + j * grid.spacing;
            double exx, eyy, exy;
            strain_at(p, fx, fy, ctx, exx, eyy, exy);
            f.exx.at(j, i) = static_cast<float>(exx);
            f.eyy.at(j, i) = static_cast<float>(eyy);
            f.exy.at(j, i) = static_cast<float>(exy);
        }
    }
    return f;
}

// Scalar magnitude combining the plane strain components (von-Mises form).
inline double equivalent_strain(double exx, double eyy, double exy) {
    return std::sqrt(std::max(0.0, exx * exx - exx * eyy + eyy * eyy + 3.0 * exy * exy));
}

}  // namespace dicfield
