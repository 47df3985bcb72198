#include "streamad/detectors/iforest_asd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamad {

double average_path_length(double n) noexcept {
    if (n <= 1.0) return 0.0;
    if (n == 2.0) return 1.0;
    constexpr double kEulerGamma = 0.5772156649015329;
    return 2.0 * (std::log(n - 1.0) + kEulerGamma) - 2.0 * (n - 1.0) / n;
}

void IsolationForest::fit(std::span<const double> data, std::size_t dim, int n_trees,
                          int subsample, Rng& rng) {
    data_ = data;
    dim_ = dim;
    const std::size_t n = data.size() / dim;
    sample_size_ = std::min<std::size_t>(n, static_cast<std::size_t>(subsample));
    max_depth_ = static_cast<int>(std::ceil(std::log2(std::max<double>(2.0, sample_size_))));
    trees_.assign(static_cast<std::size_t>(n_trees), {});

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> rows(sample_size_);
    for (auto& tree : trees_) {
        // Partial Fisher-Yates: the first sample_size_ entries are a sample
        // without replacement.
        for (std::size_t i = 0; i < sample_size_; ++i) {
            const std::size_t j = i + uniform_index(rng, n - i);
            std::swap(all[i], all[j]);
            rows[i] = all[i];
        }
        tree.reserve(2 * sample_size_);
        grow(tree, rows, 0, sample_size_, 0, rng);
    }
    data_ = {};
}

std::int32_t IsolationForest::grow(Tree& tree, std::vector<std::size_t>& rows, std::size_t begin,
                                   std::size_t end, int depth, Rng& rng) {
    const auto id = static_cast<std::int32_t>(tree.size());
    tree.push_back(Node{});
    tree[id].size = static_cast<std::int32_t>(end - begin);
    if (end - begin <= 1 || depth >= max_depth_) return id;

    std::vector<std::size_t> candidates;
    std::vector<double> lo(dim_), hi(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        lo[j] = hi[j] = data_[rows[begin] * dim_ + j];
        for (std::size_t r = begin + 1; r < end; ++r) {
            const double v = data_[rows[r] * dim_ + j];
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
        if (hi[j] > lo[j]) candidates.push_back(j);
    }
    if (candidates.empty()) return id;

    const std::size_t f = candidates[uniform_index(rng, candidates.size())];
    double threshold = uniform(rng, lo[f], hi[f]);
    if (threshold <= lo[f]) threshold = std::nextafter(lo[f], hi[f]);
    const auto mid = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                    rows.begin() + static_cast<std::ptrdiff_t>(end),
                                    [&](std::size_t r) { return data_[r * dim_ + f] < threshold; });
    const auto split = static_cast<std::size_t>(mid - rows.begin());

    tree[id].feature = static_cast<std::int32_t>(f);
    tree[id].threshold = threshold;
    const auto left = grow(tree, rows, begin, split, depth + 1, rng);
    const auto right = grow(tree, rows, split, end, depth + 1, rng);
    tree[id].left = left;
    tree[id].right = right;
    return id;
}

double IsolationForest::expected_path_length(std::span<const double> x) const {
    double total = 0.0;
    for (const auto& tree : trees_) {
        std::int32_t node = 0;
        int depth = 0;
        while (tree[node].feature >= 0) {
            node = x[tree[node].feature] < tree[node].threshold ? tree[node].left : tree[node].right;
            ++depth;
        }
        total += depth + average_path_length(tree[node].size);
    }
    return total / static_cast<double>(trees_.size());
}

double IsolationForest::score(std::span<const double> x) const {
    const double c = average_path_length(static_cast<double>(sample_size_));
    if (c <= 0.0) return 0.5;
    return std::exp2(-expected_path_length(x) / c);
}

// ---------------------------------------------------------------------------

IForestASD::IForestASD(const IForestASDParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {}

void IForestASD::init(std::size_t dim) {
    dim_ = dim;
    buffer_.assign(static_cast<std::size_t>(params_.window) * dim, 0.0);
}

double IForestASD::score(std::span<const double> x) const {
    return forest_.fitted() ? forest_.score(x) : 0.5;
}

void IForestASD::learn(std::span<const double> x) {
    std::copy(x.begin(), x.end(), buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_ * dim_));
    if (++buffered_ == static_cast<std::size_t>(params_.window)) {
        forest_ = IsolationForest();
        forest_.fit(buffer_, dim_, params_.n_trees, params_.subsample, rng_);
        buffered_ = 0;
    }
}

}  // namespace streamad
