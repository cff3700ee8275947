#pragma once

// Shared generators and independent oracles for the test suites. The
// oracles deliberately take a different route than the library: explicit
// tallies, pair enumeration, integer rounding.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "nedseg/image.hpp"
#include "nedseg/segmentation_eval.hpp"

namespace testutil {

inline std::mt19937& rng() {
    static std::mt19937 gen(0xC0FFEE);
    return gen;
}

inline nedseg::GrayImage random_image(std::size_t width, std::size_t height,
                                      nedseg::pixel_t levels = 256) {
    std::uniform_int_distribution<nedseg::pixel_t> dist(0, levels - 1);
    std::vector<nedseg::pixel_t> px(width * height);
    for (auto& p : px)
        p = dist(rng());
    return nedseg::GrayImage(width, height, levels, std::move(px));
}

inline nedseg::GrayImage random_image_up_to(std::size_t max_side,
                                            nedseg::pixel_t levels = 256) {
    std::uniform_int_distribution<std::size_t> side(1, max_side);
    return random_image(side(rng()), side(rng()), levels);
}

// Entropy by explicit map-based tally and per-symbol Shannon sum.
inline double entropy_oracle(const nedseg::GrayImage& a) {
    std::map<nedseg::pixel_t, std::uint64_t> tally;
    for (auto p : a.pixels())
        ++tally[p];
    const double n = static_cast<double>(a.size());
    double e = 0.0;
    for (const auto& [value, count] : tally) {
        const double p = static_cast<double>(count) / n;
        e += p * (-std::log2(p));
    }
    return e;
}

// Rand index by explicit enumeration of all unordered pixel pairs.
inline double rand_index_oracle(const nedseg::LabelMap& s,
                                const nedseg::LabelMap& g) {
    const std::size_t n = s.size();
    std::uint64_t agree = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++pairs;
            const bool ts = s[i] == s[j];
            const bool tg = g[i] == g[j];
            if (ts == tg)
                ++agree;
        }
    }
    if (pairs == 0)
        return 1.0;
    return static_cast<double>(agree) / static_cast<double>(pairs);
}

// PRI by the literal pairwise sum with averaged co-membership
// probabilities.
inline double pri_oracle(const nedseg::LabelMap& s,
                         const nedseg::GroundTruthSet& g) {
    const std::size_t n = s.size();
    const double k = static_cast<double>(g.members.size());
    double acc = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++pairs;
            double together = 0.0;
            for (const auto& m : g.members)
                if (m[i] == m[j])
                    together += 1.0;
            const double p = together / k;
            const bool cs = s[i] == s[j];
            acc += cs ? p : 1.0 - p;
        }
    }
    if (pairs == 0)
        return 1.0;
    return acc / static_cast<double>(pairs);
}

// Expected PRI baseline with q_ij = p_ij, by the literal pairwise sum.
inline double expected_pri_oracle(const nedseg::GroundTruthSet& g) {
    const std::size_t n = g.members.front().size();
    const double k = static_cast<double>(g.members.size());
    double acc = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++pairs;
            double together = 0.0;
            for (const auto& m : g.members)
                if (m[i] == m[j])
                    together += 1.0;
            const double p = together / k;
            acc += p * p + (1.0 - p) * (1.0 - p);
        }
    }
    if (pairs == 0)
        return 1.0;
    return acc / static_cast<double>(pairs);
}

// Flat-kernel filter pass in exact integer arithmetic:
// round-half-up(sum/cnt) = (2*sum + cnt) / (2*cnt).
inline nedseg::GrayImage filter_pass_oracle(const nedseg::GrayImage& a,
                                            std::size_t hs, double hr) {
    const auto w = static_cast<std::ptrdiff_t>(a.width());
    const auto ht = static_cast<std::ptrdiff_t>(a.height());
    const auto radius = static_cast<std::ptrdiff_t>(hs);
    std::vector<nedseg::pixel_t> out(a.size());
    for (std::ptrdiff_t r = 0; r < ht; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            const auto center = static_cast<double>(
                a.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
            std::uint64_t sum = 0, cnt = 0;
            for (std::ptrdiff_t rr = r - radius; rr <= r + radius; ++rr) {
                for (std::ptrdiff_t cc = c - radius; cc <= c + radius; ++cc) {
                    if (rr < 0 || cc < 0 || rr >= ht || cc >= w)
                        continue;
                    const auto v = a.at(static_cast<std::size_t>(rr),
                                        static_cast<std::size_t>(cc));
                    if (std::fabs(static_cast<double>(v) - center) <= hr) {
                        sum += v;
                        ++cnt;
                    }
                }
            }
            const std::uint64_t rounded = (2 * sum + cnt) / (2 * cnt);
            const std::uint64_t hi = a.levels() - 1;
            out[static_cast<std::size_t>(r) * a.width() +
                static_cast<std::size_t>(c)] =
                static_cast<nedseg::pixel_t>(rounded > hi ? hi : rounded);
        }
    }
    return nedseg::GrayImage(a.width(), a.height(), a.levels(), std::move(out));
}

// All set partitions of n elements as restricted-growth label strings.
inline std::vector<std::vector<std::uint32_t>> all_partitions(std::size_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur(n, 0);
    // cur[i] may be at most 1 + max(cur[0..i-1])
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t maxlabel) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t l = 0; l <= maxlabel + 1; ++l) {
            cur[i] = l;
            self(self, i + 1, std::max(maxlabel, l));
        }
    };
    if (n == 0)
        return out;
    cur[0] = 0;
    rec(rec, 1, 0);
    return out;
}

inline nedseg::LabelMap random_partition(std::size_t n,
                                         std::uint32_t max_regions) {
    std::uniform_int_distribution<std::uint32_t> dist(0, max_regions - 1);
    std::vector<std::uint32_t> labels(n);
    for (auto& l : labels)
        l = dist(rng());
    return nedseg::LabelMap(n, 1, std::move(labels));
}

// The Ejemplo-1 operand matrices.
inline nedseg::GrayImage example_matrix_a() {
    return nedseg::GrayImage(3, 3, 256, {8, 3, 2, 9, 15, 1, 4, 7, 2});
}
inline nedseg::GrayImage example_matrix_b() {
    return nedseg::GrayImage(3, 3, 256, {8, 1, 5, 3, 12, 2, 6, 4, 1});
}

} // namespace testutil
