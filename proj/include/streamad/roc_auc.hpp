#pragma once

#include <cstdint>
#include <span>

namespace streamad {

/// Area under the ROC curve: P(s+ > s-) + P(s+ = s-)/2 over positive/negative
/// pairs, via average ranks in O(n log n).
///
/// The result is snapped to a multiple of 2^-53, which makes the inversion
/// identity roc_auc(-s, y) == 1 - roc_auc(s, y) hold bit-for-bit.
///
/// Throws DegenerateLabels unless both classes are present, and Error on a
/// length mismatch, a label outside {0,1}, or a non-finite score.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

}  // namespace streamad
