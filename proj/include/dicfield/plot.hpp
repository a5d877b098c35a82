#pragma once

// Minimal plotting: PNG bar histograms and colormapped field rasters (numeric
// axis labels via a built-in 5x7 digit font), SVG line charts for anything
// that needs real text. Every plot entry point has a CSV twin written by the
// caller; the figures are derived artifacts only.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "png_io.hpp"

namespace dicfield {

struct Histogram {
    double lo = 0, hi = 1;
    std::vector<size_t> counts;

    double bin_width() const { return counts.empty() ? 0 : (hi - lo) / static_cast<double>(counts.size()); }
};

inline Histogram make_histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(static_cast<size_t>(bins), 0);
    if (hi <= lo) return h;
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        h.counts[static_cast<size_t>(b)]++;
    }
    return h;
}

inline Histogram make_histogram(const std::vector<double>& values, int bins) {
    double lo = 0, hi = 1;
    if (!values.empty()) {
        lo = *std::min_element(values.begin(), values.end());
        hi = *std::max_element(values.begin(), values.end());
        if (hi <= lo) hi = lo + 1e-9;
    }
    return make_histogram(values, bins, lo, hi);
}

namespace detail {

// 5x7 glyphs for numeric labels: 0-9 - . e +
inline const unsigned char* digit_glyph(char c) {
    static const unsigned char glyphs[14][7] = {
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
        {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
        {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
        {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
        {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
        {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
        {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00},  // -
        {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C},  // .
        {0x00, 0x00, 0x0E, 0x11, 0x1F, 0x10, 0x0E},  // e
        {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00},  // +
    };
    if (c >= '0' && c <= '9') return glyphs[c - '0'];
    if (c == '-') return glyphs[10];
    if (c == '.') return glyphs[11];
    if (c == 'e') return glyphs[12];
    if (c == '+') return glyphs[13];
    return nullptr;
}

inline void draw_text(RgbImage& img, int x, int y, const std::string& text, unsigned char r = 0,
                      unsigned char g = 0, unsigned char b = 0) {
    for (char c : text) {
        const unsigned char* gl = digit_glyph(c);
        if (gl) {
            for (int row = 0; row < 7; ++row)
                for (int col = 0; col < 5; ++col)
                    if (gl[row] & (1 << (4 - col))) img.set(x + col, y + row, r, g, b);
        }
        x += 6;
    }
}

inline std::string fmt_num(double v) {
    char buf[32];
    double a = std::fabs(v);
    if (v == 0)
        std::snprintf(buf, sizeof(buf), "0");
    else if (a >= 0.01 && a < 10000)
        std::snprintf(buf, sizeof(buf), "%.3g", v);
    else
        std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
}

inline void hline(RgbImage& img, int x0, int x1, int y, unsigned char r, unsigned char g, unsigned char b) {
    for (int x = x0; x <= x1; ++x) img.set(x, y, r, g, b);
}
inline void vline(RgbImage& img, int x, int y0, int y1, unsigned char r, unsigned char g, unsigned char b) {
    for (int y = y0; y <= y1; ++y) img.set(x, y, r, g, b);
}

}  // namespace detail

inline void write_histogram_png(const std::filesystem::path& path, const Histogram& hist, int width = 480,
                                int height = 320) {
    RgbImage img(width, height);
    const int ml = 48, mr = 12, mt = 12, mb = 32;  // margins
    int pw = width - ml - mr, ph = height - mt - mb;
    size_t peak = 1;
    for (size_t c : hist.counts) peak = std::max(peak, c);

    for (size_t i = 0; i < hist.counts.size(); ++i) {
        int x0 = ml + static_cast<int>(static_cast<double>(i) / hist.counts.size() * pw);
        int x1 = ml + static_cast<int>(static_cast<double>(i + 1) / hist.counts.size() * pw) - 1;
        int bh = static_cast<int>(static_cast<double>(hist.counts[i]) / static_cast<double>(peak) * ph);
        for (int x = x0; x <= std::max(x0, x1); ++x)
            detail::vline(img, x, mt + ph - bh, mt + ph - 1, 70, 110, 200);
    }
    detail::hline(img, ml, ml + pw, mt + ph, 0, 0, 0);
    detail::vline(img, ml, mt, mt + ph, 0, 0, 0);
    // ticks: min/mid/max on x, 0/peak on y
    detail::draw_text(img, ml - 2, mt + ph + 6, detail::fmt_num(hist.lo));
    detail::draw_text(img, ml + pw / 2 - 10, mt + ph + 6, detail::fmt_num(0.5 * (hist.lo + hist.hi)));
    detail::draw_text(img, ml + pw - 20, mt + ph + 6, detail::fmt_num(hist.hi));
    detail::draw_text(img, 4, mt + ph - 7, detail::fmt_num(0));
    detail::draw_text(img, 4, mt, detail::fmt_num(static_cast<double>(peak)));
    write_png_rgb8(path, img);
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path.string());
    f << "bin_lo,bin_hi,count\n";
    double bw = hist.bin_width();
    for (size_t i = 0; i < hist.counts.size(); ++i)
        f << (hist.lo + bw * static_cast<double>(i)) << "," << (hist.lo + bw * static_cast<double>(i + 1)) << ","
          << hist.counts[i] << "\n";
}

// ---------------------------------------------------------------------------
// Colormapped field rasters (blue -> green -> red ramp, symmetric or capped).
// A JSON sidecar records the color scale so the figure stays interpretable.
// ---------------------------------------------------------------------------

inline void map_color(double t, unsigned char& r, unsigned char& g, unsigned char& b) {
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [](double a, double bb, double tt) { return a + (bb - a) * tt; };
    double rr, gg, bb2;
    if (t < 0.25) {
        rr = 0;
        gg = lerp(0, 1, t / 0.25);
        bb2 = 1;
    } else if (t < 0.5) {
        rr = 0;
        gg = 1;
        bb2 = lerp(1, 0, (t - 0.25) / 0.25);
    } else if (t < 0.75) {
        rr = lerp(0, 1, (t - 0.5) / 0.25);
        gg = 1;
        bb2 = 0;
    } else {
        rr = 1;
        gg = lerp(1, 0, (t - 0.75) / 0.25);
        bb2 = 0;
    }
    r = static_cast<unsigned char>(rr * 255);
    g = static_cast<unsigned char>(gg * 255);
    b = static_cast<unsigned char>(bb2 * 255);
}

inline void write_colormap_png(const std::filesystem::path& path, const Plane& field, double vmin, double vmax) {
    RgbImage img(field.width, field.height);
    double span = vmax - vmin;
    if (span <= 0) span = 1;
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x) {
            unsigned char r, g, b;
            map_color((field.at(x, y) - vmin) / span, r, g, b);
            img.set(x, y, r, g, b);
        }
    write_png_rgb8(path, img);
    char meta[256];
    std::snprintf(meta, sizeof(meta), "{\n  \"vmin\": %.9g,\n  \"vmax\": %.9g,\n  \"colormap\": \"bgr-ramp\"\n}\n",
                  vmin, vmax);
    write_file_atomic(path.string() + ".scale.json", meta);
}

// ---------------------------------------------------------------------------
// SVG line charts: series of (x, y) points, axis labels, legend.
// ---------------------------------------------------------------------------

struct SvgSeries {
    std::string name;
    std::string color = "#4466cc";
    std::vector<std::pair<double, double>> points;
    bool with_markers = false;
    std::vector<double> err;  // optional symmetric error bars, one per point
};

inline void write_line_svg(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                           const std::string& title, const std::string& xlabel, const std::string& ylabel,
                           int width = 640, int height = 420) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.points.size(); ++i) {
            auto [x, y] = s.points[i];
            double e = i < s.err.size() ? s.err[i] : 0.0;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y - e);
            ymax = std::max(ymax, y + e);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    double padx = 0.03 * (xmax - xmin), pady = 0.06 * (ymax - ymin);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;

    const int ml = 64, mr = 16, mt = 34, mb = 46;
    int pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string out;
    char buf[512];
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\" font-size=\"12\">\n",
                  width, height, width, height);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf), "<text x=\"%d\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">%s</text>\n",
                  width / 2, title.c_str());
    out += buf;
    // axes + ticks
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n"
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                  ml, mt + ph, ml + pw, mt + ph, ml, mt, ml, mt + ph);
    out += buf;
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4.0;
        double yv = ymin + (ymax - ymin) * i / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%s</text>\n",
                      px(xv), mt + ph + 16, detail::fmt_num(xv).c_str());
        out += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\">%s</text>\n",
                      ml - 6, py(yv) + 4, detail::fmt_num(yv).c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">%s</text>\n", ml + pw / 2,
                  height - 8, xlabel.c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"%d\" text-anchor=\"middle\" transform=\"rotate(-90 16 %d)\">%s</text>\n",
                  mt + ph / 2, mt + ph / 2, ylabel.c_str());
    out += buf;

    int legend_y = mt + 6;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        std::string pts;
        for (auto [x, y] : s.points) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x), py(y));
            pts += buf;
        }
        std::snprintf(buf, sizeof(buf), "<polyline points=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.6\"/>\n",
                      pts.c_str(), s.color.c_str());
        out += buf;
        for (size_t i = 0; i < s.points.size(); ++i) {
            auto [x, y] = s.points[i];
            if (i < s.err.size() && s.err[i] > 0) {
                std::snprintf(buf, sizeof(buf),
                              "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"/>\n",
                              px(x), py(y - s.err[i]), px(x), py(y + s.err[i]), s.color.c_str());
                out += buf;
            }
            if (s.with_markers) {
                std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", px(x),
                              py(y), s.color.c_str());
                out += buf;
            }
        }
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%d\" y=\"%d\" width=\"14\" height=\"3\" fill=\"%s\"/>"
                      "<text x=\"%d\" y=\"%d\">%s</text>\n",
                      ml + pw - 150, legend_y, s.color.c_str(), ml + pw - 132, legend_y + 6, s.name.c_str());
        out += buf;
        legend_y += 16;
    }
    out += "</svg>\n";
    write_file_atomic(path, out);
}

}  // namespace dicfield
