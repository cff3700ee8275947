#pragma once

// Region extraction from filtered images and pairwise-agreement scores
// against ground-truth partitions: Rand index, probabilistic Rand index
// over a ground-truth set, and its expectation-normalized variant.

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nedseg/errors.hpp"
#include "nedseg/image.hpp"

namespace nedseg {

// Per-pixel region identifiers; labels are dense in [0, num_regions).
class LabelMap {
public:
    LabelMap(std::size_t width, std::size_t height,
             std::vector<std::uint32_t> labels)
        : width_(width), height_(height), labels_(std::move(labels)) {
        if (width_ < 1 || height_ < 1)
            throw DimensionMismatchError("label map dimensions must be >= 1");
        if (labels_.size() != width_ * height_)
            throw DimensionMismatchError("label count does not match dimensions");
        densify();
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return labels_.size(); }
    std::uint32_t num_regions() const { return num_regions_; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }
    std::uint32_t operator[](std::size_t i) const { return labels_[i]; }

    bool same_dimensions(const LabelMap& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    // Renumber labels densely in first-encounter order.
    void densify() {
        std::unordered_map<std::uint32_t, std::uint32_t> remap;
        for (auto& l : labels_) {
            auto [it, inserted] =
                remap.emplace(l, static_cast<std::uint32_t>(remap.size()));
            l = it->second;
        }
        num_regions_ = static_cast<std::uint32_t>(remap.size());
    }

    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint32_t> labels_;
    std::uint32_t num_regions_ = 0;
};

// One or more ground-truth partitions sharing the segmented image's
// dimensions.
struct GroundTruthSet {
    std::vector<LabelMap> members;

    void validate() const {
        if (members.empty())
            throw Error("ground-truth set must be nonempty");
        for (const auto& m : members)
            if (!m.same_dimensions(members.front()))
                throw DimensionMismatchError(
                    "ground-truth maps differ in dimensions");
    }
};

enum class Connectivity : int { four = 4, eight = 8 };

// Connected components of exactly-equal intensity; labels assigned in
// first-encounter (row-major scan) order.
inline LabelMap label_regions(const GrayImage& a,
                              Connectivity conn = Connectivity::four) {
    const std::size_t w = a.width();
    const std::size_t h = a.height();
    constexpr std::uint32_t unlabeled = 0xFFFFFFFFu;
    std::vector<std::uint32_t> labels(a.size(), unlabeled);
    std::vector<std::size_t> stack;
    std::uint32_t next = 0;

    const int offs4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    const int offs8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                             {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    const auto* offs = conn == Connectivity::four ? offs4 : offs8;
    const int noffs = conn == Connectivity::four ? 4 : 8;

    for (std::size_t seed = 0; seed < a.size(); ++seed) {
        if (labels[seed] != unlabeled)
            continue;
        const pixel_t v = a[seed];
        const std::uint32_t id = next++;
        labels[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const auto r = static_cast<std::ptrdiff_t>(i / w);
            const auto c = static_cast<std::ptrdiff_t>(i % w);
            for (int k = 0; k < noffs; ++k) {
                const std::ptrdiff_t rr = r + offs[k][0];
                const std::ptrdiff_t cc = c + offs[k][1];
                if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(h) ||
                    cc >= static_cast<std::ptrdiff_t>(w))
                    continue;
                const std::size_t j = static_cast<std::size_t>(rr) * w +
                                      static_cast<std::size_t>(cc);
                if (labels[j] == unlabeled && a[j] == v) {
                    labels[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    return LabelMap(w, h, std::move(labels));
}

namespace detail {

inline std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

// Number of unordered pixel pairs on which the two partitions agree
// (both together or both apart), via the contingency table.
inline std::uint64_t pair_agreements(const LabelMap& s, const LabelMap& g) {
    const std::uint64_t rs = s.num_regions();
    std::unordered_map<std::uint64_t, std::uint64_t> joint;
    std::vector<std::uint64_t> sa(s.num_regions(), 0), gb(g.num_regions(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        ++sa[s[i]];
        ++gb[g[i]];
        ++joint[static_cast<std::uint64_t>(g[i]) * rs + s[i]];
    }
    std::uint64_t sum_joint = 0;
    for (const auto& [key, cnt] : joint)
        sum_joint += choose2(cnt);
    std::uint64_t sum_s = 0, sum_g = 0;
    for (auto c : sa)
        sum_s += choose2(c);
    for (auto c : gb)
        sum_g += choose2(c);
    const std::uint64_t total = choose2(s.size());
    // together-in-both + apart-in-both
    return sum_joint + (total - sum_s - sum_g + sum_joint);
}

} // namespace detail

// Fraction of unordered pixel pairs classified the same way by both
// partitions. Invariant under relabeling; 1 for identical partitions.
inline double rand_index(const LabelMap& s, const LabelMap& g) {
    if (!s.same_dimensions(g))
        throw DimensionMismatchError("label maps differ in dimensions");
    const std::uint64_t total = detail::choose2(s.size());
    if (total == 0)
        return 1.0; // single pixel: no pairs to disagree on
    return static_cast<double>(detail::pair_agreements(s, g)) /
           static_cast<double>(total);
}

// PRI against a set of ground truths. With co-membership probabilities
// p_ij averaged over the set, the pairwise sum collapses to the mean Rand
// index against the members.
inline double pri(const LabelMap& s, const GroundTruthSet& g) {
    g.validate();
    for (const auto& m : g.members)
        if (!s.same_dimensions(m))
            throw DimensionMismatchError(
                "segmentation and ground truth differ in dimensions");
    double acc = 0.0;
    for (const auto& m : g.members)
        acc += rand_index(s, m);
    return acc / static_cast<double>(g.members.size());
}

// Baseline PRI of a random segmentation whose co-membership probability
// equals the set's own p_ij. Expanding the square yields the mean pairwise
// Rand index over all ordered member pairs (diagonal included).
inline double expected_pri(const GroundTruthSet& g) {
    g.validate();
    const std::size_t k = g.members.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            acc += i == j ? 1.0 : rand_index(g.members[i], g.members[j]);
    return acc / static_cast<double>(k * k);
}

// (pri - expected) / (1 - expected), taking the maximum index as 1.
inline double normalize_pri(double pri_value, double expected) {
    if (expected >= 1.0)
        throw DegenerateNormalizationError(
            "expected PRI equals 1; NPRI undefined");
    if (pri_value >= 1.0)
        return 1.0; // numerator equals denominator
    return (pri_value - expected) / (1.0 - expected);
}

inline double npri(const LabelMap& s, const GroundTruthSet& g) {
    return normalize_pri(pri(s, g), expected_pri(g));
}

} // namespace nedseg
