#pragma once

// Mean shift iterative segmentation: one flat-kernel filtering pass over
// the joint spatial-range domain, and the outer loop that repeats the pass
// until an inter-iteration similarity criterion drops below a threshold.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nedseg/image.hpp"
#include "nedseg/similarity.hpp"

namespace nedseg {

struct Bandwidths {
    double range = 15.0;   // h_r, in gray levels
    std::size_t spatial = 12; // h_s, Chebyshev radius in pixels

    void validate() const {
        if (!(range > 0.0))
            throw Error("range bandwidth must be positive");
        if (spatial < 1)
            throw Error("spatial bandwidth must be >= 1");
    }
};

enum class CriterionKind { ned, weak_entropy };

struct StoppingRule {
    CriterionKind kind = CriterionKind::ned;
    double epsilon = 0.5;
    std::size_t max_iterations = 500;

    void validate() const {
        if (epsilon < 0.0)
            throw Error("epsilon must be >= 0");
        if (max_iterations < 1)
            throw Error("max_iterations must be >= 1");
    }
};

inline double default_epsilon(CriterionKind kind) {
    return kind == CriterionKind::ned ? 0.5 : 0.002;
}

enum class Termination { threshold, cap };

struct IterationEntry {
    std::size_t iteration = 0; // 1-based
    double criterion = 0.0;
    double entropy = 0.0; // of the image produced by this iteration
};

struct IterationTrace {
    std::vector<IterationEntry> entries;
    Termination terminated_by = Termination::threshold;
};

// One filtering pass with a flat kernel: each output pixel is the rounded
// mean of the values in its clipped square spatial window whose intensity
// lies within h_r of the center value. Range distance is the ordinary
// integer difference, never modular. Round half up, clamp to [0, levels-1].
inline GrayImage mean_shift_filter_pass(const GrayImage& a,
                                        const Bandwidths& h) {
    h.validate();
    const std::size_t w = a.width();
    const std::size_t ht = a.height();
    const std::size_t hs = h.spatial;
    std::vector<pixel_t> out(a.size());
    for (std::size_t r = 0; r < ht; ++r) {
        const std::size_t r0 = r > hs ? r - hs : 0;
        const std::size_t r1 = std::min(r + hs, ht - 1);
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t c0 = c > hs ? c - hs : 0;
            const std::size_t c1 = std::min(c + hs, w - 1);
            const double center = static_cast<double>(a.at(r, c));
            std::uint64_t sum = 0;
            std::uint64_t cnt = 0;
            for (std::size_t rr = r0; rr <= r1; ++rr) {
                for (std::size_t cc = c0; cc <= c1; ++cc) {
                    const pixel_t v = a.at(rr, cc);
                    if (std::fabs(static_cast<double>(v) - center) <= h.range) {
                        sum += v;
                        ++cnt;
                    }
                }
            }
            // The center always qualifies, so cnt >= 1.
            const double mean =
                static_cast<double>(sum) / static_cast<double>(cnt);
            auto rounded = static_cast<std::int64_t>(std::floor(mean + 0.5));
            const std::int64_t hi = static_cast<std::int64_t>(a.levels()) - 1;
            if (rounded < 0)
                rounded = 0;
            if (rounded > hi)
                rounded = hi;
            out[r * w + c] = static_cast<pixel_t>(rounded);
        }
    }
    return GrayImage(w, ht, a.levels(), std::move(out));
}

inline double evaluate_rule(const StoppingRule& rule, const GrayImage& previous,
                            const GrayImage& current) {
    return rule.kind == CriterionKind::ned
               ? ned(previous, current).value
               : weak_distance(previous, current).value;
}

struct SegmentationResult {
    GrayImage image;
    IterationTrace trace;
};

// Algorithm: repeat { B = filter(A); record (k, criterion(A,B), E(B));
// A = B } until criterion <= epsilon or k = max_iterations. At least one
// pass always runs.
inline SegmentationResult mshi_segment(GrayImage a, const Bandwidths& h,
                                       const StoppingRule& rule) {
    h.validate();
    rule.validate();
    IterationTrace trace;
    trace.terminated_by = Termination::cap;
    for (std::size_t k = 1; k <= rule.max_iterations; ++k) {
        GrayImage b = mean_shift_filter_pass(a, h);
        const double crit = evaluate_rule(rule, a, b);
        trace.entries.push_back({k, crit, entropy(b)});
        a = std::move(b);
        if (crit <= rule.epsilon) {
            trace.terminated_by = Termination::threshold;
            break;
        }
    }
    return {std::move(a), std::move(trace)};
}

} // namespace nedseg
