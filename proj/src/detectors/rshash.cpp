#include "streamad/detectors/rshash.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamad {

RSHash::RSHash(const RSHashParams& params, std::uint64_t seed)
    : params_(params), rng_(seed), hash_seed_(mix64(seed ^ 0x5253486173680000ULL)) {}

void RSHash::init(std::size_t dim) {
    dim_ = dim;
    const double s = params_.sample_size;
    const double lo_f = 1.0 / std::sqrt(s);
    const double hi_f = 1.0 - lo_f;
    std::vector<std::uint32_t> all(dim);
    components_.resize(static_cast<std::size_t>(params_.n_components));
    for (auto& c : components_) {
        c.locality = uniform(rng_, lo_f, hi_f);
        const double base = std::max(2.0, 1.0 / c.locality);
        const double log_s = std::log(s) / std::log(base);
        const double r_lo = 1.0 + 0.5 * log_s;
        const double r_hi = std::max(r_lo, log_s);
        auto r = static_cast<std::size_t>(std::floor(r_lo == r_hi ? r_lo : uniform(rng_, r_lo, r_hi)));
        r = std::clamp<std::size_t>(r, 1, dim);
        std::iota(all.begin(), all.end(), 0u);
        for (std::size_t i = 0; i < r; ++i) std::swap(all[i], all[i + uniform_index(rng_, dim - i)]);
        c.dims.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(r));
        std::sort(c.dims.begin(), c.dims.end());
        c.shift.resize(r);
        for (auto& a : c.shift) a = uniform(rng_, 0.0, c.locality);
    }
    counts_.assign(components_.size() * static_cast<std::size_t>(params_.n_hash_tables)
                       << params_.table_bits,
                   0);
    warmup_.reserve(static_cast<std::size_t>(params_.sample_size) * dim);
}

std::vector<std::int64_t> RSHash::cell(std::size_t i, std::span<const double> x) const {
    const auto& c = components_[i];
    std::vector<std::int64_t> out(c.dims.size());
    for (std::size_t j = 0; j < c.dims.size(); ++j) {
        const auto d = c.dims[j];
        const double range = max_[d] - min_[d];
        const double v = range > 0.0 ? (x[d] - min_[d]) / range : 0.0;
        out[j] = static_cast<std::int64_t>(std::floor((v + c.shift[j]) / c.locality));
    }
    return out;
}

std::uint64_t RSHash::cell_hash(std::size_t i, std::span<const double> x) const {
    const auto& c = components_[i];
    std::uint64_t h = hash_combine(hash_seed_, i);
    for (std::size_t j = 0; j < c.dims.size(); ++j) {
        const auto d = c.dims[j];
        const double range = max_[d] - min_[d];
        const double v = range > 0.0 ? (x[d] - min_[d]) / range : 0.0;
        const auto bin = static_cast<std::int64_t>(std::floor((v + c.shift[j]) / c.locality));
        h = hash_combine(h, static_cast<std::uint64_t>(bin));
    }
    return h;
}

std::size_t RSHash::slot(std::size_t i, std::size_t table, std::uint64_t h) const noexcept {
    const std::size_t width = std::size_t{1} << params_.table_bits;
    const std::uint64_t t = hash_combine(h, table + 1);
    return (i * static_cast<std::size_t>(params_.n_hash_tables) + table) * width +
           static_cast<std::size_t>(t & (width - 1));
}

std::uint32_t RSHash::min_count(std::size_t i, std::span<const double> x) const {
    const auto h = cell_hash(i, x);
    std::uint32_t m = counts_[slot(i, 0, h)];
    for (std::size_t t = 1; t < static_cast<std::size_t>(params_.n_hash_tables); ++t) {
        m = std::min(m, counts_[slot(i, t, h)]);
    }
    return m;
}

double RSHash::score(std::span<const double> x) const {
    if (!ready_) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        s += std::log1p(static_cast<double>(min_count(i, x)));
    }
    return s == 0.0 ? 0.0 : -s / static_cast<double>(components_.size());
}

void RSHash::insert(std::span<const double> x) {
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto h = cell_hash(i, x);
        for (std::size_t t = 0; t < static_cast<std::size_t>(params_.n_hash_tables); ++t) {
            ++counts_[slot(i, t, h)];
        }
    }
}

void RSHash::learn(std::span<const double> x) {
    if (ready_) {
        insert(x);
        return;
    }
    warmup_.insert(warmup_.end(), x.begin(), x.end());
    if (++warmup_count_ < static_cast<std::size_t>(params_.sample_size)) return;

    min_.assign(warmup_.begin(), warmup_.begin() + static_cast<std::ptrdiff_t>(dim_));
    max_ = min_;
    for (std::size_t r = 1; r < warmup_count_; ++r) {
        for (std::size_t j = 0; j < dim_; ++j) {
            min_[j] = std::min(min_[j], warmup_[r * dim_ + j]);
            max_[j] = std::max(max_[j], warmup_[r * dim_ + j]);
        }
    }
    ready_ = true;
    for (std::size_t r = 0; r < warmup_count_; ++r) {
        insert(std::span<const double>(warmup_.data() + r * dim_, dim_));
    }
    warmup_.clear();
    warmup_.shrink_to_fit();
}

}  // namespace streamad
