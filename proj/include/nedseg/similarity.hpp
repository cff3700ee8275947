#pragma once

// Similarity indices between same-shape images: the weak entropy distance
// |E(A) - E(B)| and the natural entropy distance E(A - B) over the image
// group, plus its [0,1] normalization.
//
// Computing NED requires forming the modular difference and its histogram,
// so the cost is O(width*height) per call despite being a single entropy
// evaluation.

#include <cmath>

#include "nedseg/image.hpp"

namespace nedseg {

enum class SimilarityKind { weak_entropy, ned, ned_normalized };

struct SimilarityValue {
    double value = 0.0;
    SimilarityKind kind = SimilarityKind::ned;
};

// |E(A) - E(B)|. Zero for any pair of equal-entropy images, even when the
// images differ everywhere.
inline SimilarityValue weak_distance(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    return {std::fabs(entropy(a) - entropy(b)), SimilarityKind::weak_entropy};
}

// Natural entropy distance: entropy of the modular difference.
// Zero exactly on strongly equivalent pairs; bounded by log2(levels).
inline SimilarityValue ned(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    return {entropy(sub_mod(a, b)), SimilarityKind::ned};
}

// NED divided by the bits-per-pixel bound log2(levels); lies in [0,1].
inline SimilarityValue ned_normalized(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    const double bound = std::log2(static_cast<double>(a.levels()));
    return {ned(a, b).value / bound, SimilarityKind::ned_normalized};
}

} // namespace nedseg
