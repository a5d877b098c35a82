#pragma once

// Shared primitives: image/plane container, seeded RNG with portable
// distributions, small math helpers, error taxonomy, byte-level IO.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicfield {

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes: usage/config -> 1, data -> 2,
// numeric -> 3.
// ---------------------------------------------------------------------------

inline constexpr double kPi = 3.14159265358979323846;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Plane: row-major single-channel float raster. Doubles as GrayImage (values
// in [0,1]) and as a field component plane (pixels or dimensionless strain).
// ---------------------------------------------------------------------------

struct Plane {
    int width = 0;
    int height = 0;
    std::vector<float> v;

    Plane() = default;
    Plane(int w, int h, float fill = 0.f) : width(w), height(h), v(static_cast<size_t>(w) * h, fill) {}

    float& at(int x, int y) { return v[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return v.size(); }
    bool same_shape(const Plane& o) const { return width == o.width && height == o.height; }

    float min() const { return v.empty() ? 0.f : *std::min_element(v.begin(), v.end()); }
    float max() const { return v.empty() ? 0.f : *std::max_element(v.begin(), v.end()); }

    double mean() const {
        double s = 0;
        for (float x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    }

    // Bilinear sample with edge clamping; (x, y) in pixel coordinates.
    float sample_bilinear(double x, double y) const {
        x = std::clamp(x, 0.0, static_cast<double>(width - 1));
        y = std::clamp(y, 0.0, static_cast<double>(height - 1));
        int x0 = static_cast<int>(std::floor(x));
        int y0 = static_cast<int>(std::floor(y));
        int x1 = std::min(x0 + 1, width - 1);
        int y1 = std::min(y0 + 1, height - 1);
        double fx = x - x0, fy = y - y0;
        double a = at(x0, y0) * (1 - fx) + at(x1, y0) * fx;
        double b = at(x0, y1) * (1 - fx) + at(x1, y1) * fx;
        return static_cast<float>(a * (1 - fy) + b * fy);
    }
};

using GrayImage = Plane;

// Field-plane grid placement inside a parent frame: plane pixel (i, j) sits at
// frame coordinates (x0 + j * spacing, y0 + i * spacing).
struct FieldGrid {
    double x0 = 0.0;
    double y0 = 0.0;
    double spacing = 1.0;
};

struct DisplacementField {
    Plane u, v;  // pixels of the grid the planes are defined on
    FieldGrid grid;
};

struct StrainField {
    Plane exx, eyy, exy;  // dimensionless
    FieldGrid grid;
};

// ---------------------------------------------------------------------------
// RNG. mt19937_64 with explicit distribution mappings so that sampled streams
// are identical across standard libraries (std::*_distribution is not
// portable). All dataset determinism rests on this.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(uint64_t seed = 0) { reseed(seed); }

    void reseed(uint64_t seed) {
        // splitmix-expanded state avoids correlated streams for nearby seeds
        uint64_t s = seed;
        state_[0] = splitmix64(s);
        state_[1] = splitmix64(state_[0]);
        state_[2] = splitmix64(state_[1]);
        state_[3] = splitmix64(state_[2]);
    }

    // xoshiro256** core
    uint64_t next_u64() {
        uint64_t& s0 = state_[0];
        uint64_t& s1 = state_[1];
        uint64_t& s2 = state_[2];
        uint64_t& s3 = state_[3];
        uint64_t result = rotl(s1 * 5, 7) * 9;
        uint64_t t = s1 << 17;
        s2 ^= s0;
        s3 ^= s1;
        s1 ^= s2;
        s0 ^= s3;
        s2 ^= t;
        s3 = rotl(s3, 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer on [lo, hi] inclusive
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        // rejection sampling to kill modulo bias
        uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % span;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<int64_t>(x % span);
    }

    // standard normal, Box-Muller (no cached spare: call-order stable)
    double normal() {
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // serialize/restore for checkpoint resume
    std::string state_string() const {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%llu %llu %llu %llu", (unsigned long long)state_[0],
                      (unsigned long long)state_[1], (unsigned long long)state_[2], (unsigned long long)state_[3]);
        return buf;
    }
    void restore_state(const std::string& s) {
        unsigned long long a, b, c, d;
        if (std::sscanf(s.c_str(), "%llu %llu %llu %llu", &a, &b, &c, &d) != 4)
            throw DataError("bad rng state string: " + s);
        state_[0] = a;
        state_[1] = b;
        state_[2] = c;
        state_[3] = d;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4] = {};
};

// Stable sub-seed derivation: master seed + stream tag + index.
inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index) {
    return splitmix64(splitmix64(master ^ (stream * 0x9e3779b97f4a7c15ULL)) ^ index);
}

// Fisher-Yates with our Rng (std::shuffle is implementation-defined).
template <typename T>
void shuffle(std::vector<T>& xs, Rng& rng) {
    for (size_t i = xs.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1));
        std::swap(xs[i - 1], xs[j]);
    }
}

// ---------------------------------------------------------------------------
// Hashing (FNV-1a 64) for determinism checks and provenance stamps.
// ---------------------------------------------------------------------------

inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t hash_plane(const Plane& p, uint64_t h = 0xcbf29ce484222325ULL) {
    h = fnv1a64(&p.width, sizeof(p.width), h);
    h = fnv1a64(&p.height, sizeof(p.height), h);
    return fnv1a64(p.v.data(), p.v.size() * sizeof(float), h);
}

inline uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for hashing: " + path.string());
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        h = fnv1a64(buf, static_cast<size_t>(f.gcount()), h);
    }
    return h;
}

// Hash every regular file under root, order-independent of traversal by
// sorting relative paths first.
inline uint64_t hash_tree(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root));
    std::sort(files.begin(), files.end());
    uint64_t h = 0xcbf29ce484222325ULL;
    for (auto& rel : files) {
        std::string s = rel.generic_string();
        h = fnv1a64(s.data(), s.size(), h);
        uint64_t fh = hash_file(root / rel);
        h = fnv1a64(&fh, sizeof(fh), h);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Raw little-endian float32 plane IO ("fields.bin" building block).
// ---------------------------------------------------------------------------

inline void write_f32le(std::ostream& os, const float* data, size_t n) {
    static_assert(sizeof(float) == 4);
    // assume little-endian host (x86/arm64le); guard anyway
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ != __ORDER_LITTLE_ENDIAN__
#error "big-endian hosts unsupported"
#endif
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 4));
}

inline void read_f32le(std::istream& is, float* data, size_t n) {
    is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * 4));
    if (static_cast<size_t>(is.gcount()) != n * 4) throw DataError("short read in float32 plane data");
}

// Atomic-ish file write: write temp then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Misc math
// ---------------------------------------------------------------------------

inline float clamp01(float x) { return std::clamp(x, 0.f, 1.f); }

inline bool all_finite(const Plane& p) {
    for (float x : p.v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double mean_abs(const Plane& p) {
    double s = 0;
    for (float x : p.v) s += std::fabs(x);
    return p.v.empty() ? 0.0 : s / static_cast<double>(p.v.size());
}

inline double max_abs(const Plane& p) {
    double m = 0;
    for (float x : p.v) m = std::max(m, static_cast<double>(std::fabs(x)));
    return m;
}

}  // namespace dicfield
