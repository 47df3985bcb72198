#include "streamad/detectors/loda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamad {

LODA::LODA(const LODAParams& params, std::uint64_t seed) : params_(params), rng_(seed) {}

void LODA::init(std::size_t dim) {
    const auto k = static_cast<std::size_t>(params_.n_projections);
    std::size_t nnz = params_.sparsity > 0
                          ? static_cast<std::size_t>(params_.sparsity)
                          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))));
    nnz = std::min(nnz, dim);

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::uint32_t> dims(dim);
    projections_.resize(k);
    for (auto& p : projections_) {
        std::iota(dims.begin(), dims.end(), 0u);
        for (std::size_t i = 0; i < nnz; ++i) {
            std::swap(dims[i], dims[i + uniform_index(rng_, dim - i)]);
        }
        p.index.assign(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(nnz));
        std::sort(p.index.begin(), p.index.end());
        p.weight.resize(nnz);
        for (auto& w : p.weight) w = normal(rng_);
    }
    counts_.assign(k * static_cast<std::size_t>(params_.n_bins), 0);
    warmup_.assign(k * static_cast<std::size_t>(params_.window), 0.0);
}

double LODA::project(std::size_t i, std::span<const double> x) const noexcept {
    const auto& p = projections_[i];
    double z = 0.0;
    for (std::size_t j = 0; j < p.index.size(); ++j) z += p.weight[j] * x[p.index[j]];
    return z;
}

std::size_t LODA::bin_of(std::size_t projection, double z) const noexcept {
    const auto& p = projections_[projection];
    const double pos = std::floor((z - p.lo) / p.width);
    const double last = params_.n_bins - 1;
    return static_cast<std::size_t>(std::clamp(pos, 0.0, last));
}

void LODA::add(std::size_t i, double z) noexcept {
    ++counts_[i * static_cast<std::size_t>(params_.n_bins) + bin_of(i, z)];
}

double LODA::score(std::span<const double> x) const {
    const double bins = params_.n_bins;
    if (!ready_) return std::log(bins);
    const double log_norm = std::log(static_cast<double>(total_) + bins);
    double s = 0.0;
    for (std::size_t i = 0; i < projections_.size(); ++i) {
        const auto c = counts_[i * static_cast<std::size_t>(params_.n_bins) + bin_of(i, project(i, x))];
        s += log_norm - std::log(static_cast<double>(c) + 1.0);
    }
    return s / static_cast<double>(projections_.size());
}

void LODA::learn(std::span<const double> x) {
    const std::size_t k = projections_.size();
    if (ready_) {
        for (std::size_t i = 0; i < k; ++i) add(i, project(i, x));
        ++total_;
        return;
    }

    for (std::size_t i = 0; i < k; ++i) warmup_[warmup_count_ * k + i] = project(i, x);
    if (++warmup_count_ < static_cast<std::size_t>(params_.window)) return;

    for (std::size_t i = 0; i < k; ++i) {
        double lo = warmup_[i], hi = warmup_[i];
        for (std::size_t r = 1; r < warmup_count_; ++r) {
            lo = std::min(lo, warmup_[r * k + i]);
            hi = std::max(hi, warmup_[r * k + i]);
        }
        if (hi - lo <= 0.0) {
            lo -= 0.5;
            hi += 0.5;
        }
        projections_[i].lo = lo;
        projections_[i].width = (hi - lo) / params_.n_bins;
    }
    ready_ = true;
    for (std::size_t r = 0; r < warmup_count_; ++r) {
        for (std::size_t i = 0; i < k; ++i) add(i, warmup_[r * k + i]);
    }
    total_ = warmup_count_;
    warmup_.clear();
    warmup_.shrink_to_fit();
}

}  // namespace streamad
