#include "streamad/roc_auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

namespace {

double snap(double v) { return std::round(v * 0x1.0p53) * 0x1.0p-53; }

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (scores.size() != labels.size()) {
        throw Error("roc_auc: " + std::to_string(scores.size()) + " scores but " +
                    std::to_string(labels.size()) + " labels");
    }
    double pos = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw Error("roc_auc: non-finite score at " + std::to_string(i));
        if (labels[i] > 1) throw Error("roc_auc: label not in {0,1} at " + std::to_string(i));
        pos += labels[i];
    }
    const double neg = static_cast<double>(scores.size()) - pos;
    if (pos == 0.0 || neg == 0.0) throw DegenerateLabels();

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks of the positives.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double tied_pos = 0.0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) tied_pos += labels[order[j++]];
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        rank_sum += tied_pos * avg_rank;
        i = j;
    }
    const double u = rank_sum - pos * (pos + 1.0) / 2.0;
    const double pairs = pos * neg;
    return 2.0 * u <= pairs ? snap(u / pairs) : 1.0 - snap((pairs - u) / pairs);
}

}  // namespace streamad
