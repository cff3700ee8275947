#pragma once

// The abelian group of gray-level images over Z_n: construction, modular
// arithmetic, the two rival subtraction regimes, histograms, Shannon
// entropy, weak/strong equivalence and quotient-class representatives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nedseg/errors.hpp"

namespace nedseg {

using pixel_t = std::uint32_t;

inline bool is_power_of_two(std::uint64_t v) {
    return v >= 1 && (v & (v - 1)) == 0;
}

// A rectangular grid of gray intensities, each a residue in Z_levels.
// Immutable after construction; all operations return new images.
class GrayImage {
public:
    GrayImage(std::size_t width, std::size_t height, pixel_t levels,
              std::vector<pixel_t> pixels)
        : width_(width), height_(height), levels_(levels),
          pixels_(std::move(pixels)) {
        if (width_ < 1 || height_ < 1)
            throw DimensionMismatchError("image dimensions must be >= 1");
        if (levels_ < 2 || !is_power_of_two(levels_))
            throw InvalidLevelsError("levels must be a power of two >= 2, got " +
                                     std::to_string(levels_));
        if (pixels_.size() != width_ * height_)
            throw DimensionMismatchError(
                "pixel count " + std::to_string(pixels_.size()) +
                " does not match " + std::to_string(width_) + "x" +
                std::to_string(height_));
        for (pixel_t p : pixels_)
            if (p >= levels_)
                throw PixelRangeError("pixel value " + std::to_string(p) +
                                      " out of range [0, " +
                                      std::to_string(levels_) + ")");
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    pixel_t levels() const { return levels_; }
    std::size_t size() const { return pixels_.size(); }
    const std::vector<pixel_t>& pixels() const { return pixels_; }

    pixel_t at(std::size_t row, std::size_t col) const {
        return pixels_[row * width_ + col];
    }
    pixel_t operator[](std::size_t i) const { return pixels_[i]; }

    bool same_shape(const GrayImage& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               levels_ == other.levels_;
    }

    friend bool operator==(const GrayImage& a, const GrayImage& b) {
        return a.same_shape(b) && a.pixels_ == b.pixels_;
    }

private:
    std::size_t width_;
    std::size_t height_;
    pixel_t levels_;
    std::vector<pixel_t> pixels_;
};

inline GrayImage new_image(std::size_t width, std::size_t height,
                           pixel_t levels, std::vector<pixel_t> pixels) {
    return GrayImage(width, height, levels, std::move(pixels));
}

inline GrayImage scalar_image(std::size_t width, std::size_t height,
                              pixel_t levels, pixel_t s) {
    if (levels < 2 || !is_power_of_two(levels))
        throw InvalidLevelsError("levels must be a power of two >= 2, got " +
                                 std::to_string(levels));
    if (s >= levels)
        throw PixelRangeError("scalar value " + std::to_string(s) +
                              " out of range [0, " + std::to_string(levels) +
                              ")");
    return GrayImage(width, height, levels,
                     std::vector<pixel_t>(width * height, s));
}

inline void require_same_shape(const GrayImage& a, const GrayImage& b) {
    if (!a.same_shape(b))
        throw DimensionMismatchError("images differ in shape or levels");
}

// Pixel-wise addition in Z_levels; the group law.
inline GrayImage add_mod(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::vector<pixel_t> out(a.size());
    const pixel_t n = a.levels();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (a[i] + b[i]) % n;
    return GrayImage(a.width(), a.height(), n, std::move(out));
}

// Group inverse: add_mod(a, negate_mod(a)) is the null image.
inline GrayImage negate_mod(const GrayImage& a) {
    std::vector<pixel_t> out(a.size());
    const pixel_t n = a.levels();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (n - a[i]) % n;
    return GrayImage(a.width(), a.height(), n, std::move(out));
}

inline GrayImage sub_mod(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::vector<pixel_t> out(a.size());
    const pixel_t n = a.levels();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (a[i] + n - b[i]) % n;
    return GrayImage(a.width(), a.height(), n, std::move(out));
}

// Ordinary subtraction with negatives clipped to zero.
inline GrayImage sub_truncate(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::vector<pixel_t> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] > b[i] ? a[i] - b[i] : 0;
    return GrayImage(a.width(), a.height(), a.levels(), std::move(out));
}

// Absolute value of the ordinary difference.
inline GrayImage sub_abs(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    std::vector<pixel_t> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    return GrayImage(a.width(), a.height(), a.levels(), std::move(out));
}

// Per-level pixel counts; the sufficient statistic for entropy.
struct Histogram {
    std::vector<std::uint64_t> counts; // length = levels
    std::uint64_t total = 0;
};

inline Histogram histogram(const GrayImage& a) {
    Histogram h;
    h.counts.assign(a.levels(), 0);
    for (pixel_t p : a.pixels())
        ++h.counts[p];
    h.total = a.size();
    return h;
}

inline double entropy(const Histogram& h) {
    // Summing in sorted count order makes the result a function of the
    // count multiset alone, so entropy is bitwise identical under any
    // permutation of gray levels (negation, scalar shift, pixel shuffle).
    std::vector<std::uint64_t> nonzero;
    nonzero.reserve(h.counts.size());
    for (std::uint64_t c : h.counts)
        if (c != 0) // 0 log 0 := 0
            nonzero.push_back(c);
    std::sort(nonzero.begin(), nonzero.end());
    double e = 0.0;
    const double total = static_cast<double>(h.total);
    for (std::uint64_t c : nonzero) {
        const double p = static_cast<double>(c) / total;
        e -= p * std::log2(p);
    }
    return e < 0.0 ? 0.0 : e;
}

// Shannon entropy of the gray-level distribution, in bits.
// Lies in [0, log2(levels)].
inline double entropy(const GrayImage& a) { return entropy(histogram(a)); }

struct ScalarWitness {
    bool is_scalar = false;
    pixel_t value = 0; // meaningful only when is_scalar
};

inline ScalarWitness is_scalar(const GrayImage& a) {
    const pixel_t first = a[0];
    for (pixel_t p : a.pixels())
        if (p != first)
            return {false, 0};
    return {true, first};
}

// Equal entropies within tol.
inline bool weakly_equivalent(const GrayImage& a, const GrayImage& b,
                              double tol = 1e-12) {
    require_same_shape(a, b);
    return std::fabs(entropy(a) - entropy(b)) <= tol;
}

// a = b + S for some scalar image S, i.e. the modular difference is scalar.
inline bool strongly_equivalent(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    return is_scalar(sub_mod(a, b)).is_scalar;
}

// The class representative with pixel (0,0) = 0, obtained by subtracting
// the top-left intensity. Invariant under addition of any scalar image.
inline GrayImage canonical_representative(const GrayImage& a) {
    return sub_mod(a, scalar_image(a.width(), a.height(), a.levels(), a[0]));
}

} // namespace nedseg
