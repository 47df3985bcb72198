#include "streamad/detectors/xstream.hpp"

#include <algorithm>
#include <cmath>

namespace streamad {

XStream::XStream(const XStreamParams& params, std::uint64_t seed)
    : params_(params), rng_(seed), proj_seed_(mix64(seed ^ 0x7853747265616dULL)) {}

double XStream::projection_entry(std::size_t j, std::size_t p) const noexcept {
    // Density 1/3: +sqrt(3) and -sqrt(3) each with probability 1/6.
    const double u = unit_interval(hash_combine(hash_combine(proj_seed_, j), p));
    const double scale = std::sqrt(3.0) / std::sqrt(static_cast<double>(params_.n_projections));
    if (u < 1.0 / 6.0) return scale;
    if (u < 1.0 / 3.0) return -scale;
    return 0.0;
}

void XStream::init(std::size_t dim) {
    dim_ = dim;
    const auto k = static_cast<std::size_t>(params_.n_projections);
    matrix_.resize(k * dim);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t j = 0; j < dim; ++j) matrix_[p * dim + j] = projection_entry(j, p);
    }
    chains_.resize(static_cast<std::size_t>(params_.n_chains));
    for (auto& chain : chains_) {
        chain.dims.resize(static_cast<std::size_t>(params_.chain_depth));
        for (auto& f : chain.dims) f = static_cast<std::uint32_t>(uniform_index(rng_, k));
    }
    const std::size_t cells = chains_.size() * static_cast<std::size_t>(params_.chain_depth) *
                              static_cast<std::size_t>(params_.cm_rows)
                              << params_.cm_bits;
    reference_.assign(cells, 0);
    current_.assign(cells, 0);
    initial_.reserve(static_cast<std::size_t>(params_.window) * k);
    keys_.resize(static_cast<std::size_t>(params_.chain_depth));
    prebins_.resize(k);
    seen_.resize(k);
}

std::vector<double> XStream::project(std::span<const double> x) const {
    const auto k = static_cast<std::size_t>(params_.n_projections);
    std::vector<double> y(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        const double* row = matrix_.data() + p * dim_;
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += row[j] * x[j];
        y[p] = s;
    }
    return y;
}

void XStream::bin_keys(std::size_t c, std::span<const double> y, std::vector<std::uint64_t>& keys,
                       std::vector<double>& prebins, std::vector<std::uint8_t>& seen) const {
    const auto& chain = chains_[c];
    std::fill(seen.begin(), seen.end(), 0);
    // Untouched dimensions sit in bin 0 for every point, so the key only
    // needs the dimensions visited so far.
    touched_.clear();
    for (std::size_t d = 0; d < chain.dims.size(); ++d) {
        const auto f = chain.dims[d];
        if (!seen[f]) {
            seen[f] = 1;
            prebins[f] = (y[f] + chain.shift[f]) / deltamax_[f];
            touched_.push_back(f);
        } else {
            prebins[f] = 2.0 * prebins[f] - chain.shift[f] / deltamax_[f];
        }
        std::uint64_t h = hash_combine(proj_seed_, d);
        for (const auto g : touched_) {
            h = hash_combine(h, g);
            h = hash_combine(h, static_cast<std::uint64_t>(
                                    static_cast<std::int64_t>(std::floor(prebins[g]))));
        }
        keys[d] = h;
    }
}

std::size_t XStream::cm_slot(std::size_t c, std::size_t depth, std::size_t row,
                             std::uint64_t key) const noexcept {
    const std::size_t width = std::size_t{1} << params_.cm_bits;
    const std::size_t base =
        ((c * static_cast<std::size_t>(params_.chain_depth) + depth) *
             static_cast<std::size_t>(params_.cm_rows) +
         row) *
        width;
    return base + static_cast<std::size_t>(hash_combine(key, row + 1) & (width - 1));
}

double XStream::score(std::span<const double> x) const {
    if (!ready_) return -1.0;
    const auto y = project(x);
    double total = 0.0;
    for (std::size_t c = 0; c < chains_.size(); ++c) {
        bin_keys(c, y, keys_, prebins_, seen_);
        double best = INFINITY;
        for (std::size_t d = 0; d < keys_.size(); ++d) {
            std::uint32_t cnt = reference_[cm_slot(c, d, 0, keys_[d])];
            for (std::size_t r = 1; r < static_cast<std::size_t>(params_.cm_rows); ++r) {
                cnt = std::min(cnt, reference_[cm_slot(c, d, r, keys_[d])]);
            }
            best = std::min(best, std::log2(1.0 + cnt) + static_cast<double>(d + 1));
        }
        total += best;
    }
    return -total / static_cast<double>(chains_.size());
}

void XStream::count(std::span<const double> y) {
    for (std::size_t c = 0; c < chains_.size(); ++c) {
        bin_keys(c, y, keys_, prebins_, seen_);
        for (std::size_t d = 0; d < keys_.size(); ++d) {
            for (std::size_t r = 0; r < static_cast<std::size_t>(params_.cm_rows); ++r) {
                ++current_[cm_slot(c, d, r, keys_[d])];
            }
        }
    }
}

void XStream::swap_windows() {
    reference_.swap(current_);
    std::fill(current_.begin(), current_.end(), 0u);
    window_count_ = 0;
}

void XStream::learn(std::span<const double> x) {
    auto y = project(x);
    const auto k = y.size();
    ++window_count_;
    if (ready_) {
        count(y);
        if (window_count_ == static_cast<std::size_t>(params_.window)) swap_windows();
        return;
    }

    initial_.insert(initial_.end(), y.begin(), y.end());
    if (window_count_ < static_cast<std::size_t>(params_.window)) return;

    const std::size_t n = initial_.size() / k;
    deltamax_.assign(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        double lo = initial_[p], hi = initial_[p];
        for (std::size_t r = 1; r < n; ++r) {
            lo = std::min(lo, initial_[r * k + p]);
            hi = std::max(hi, initial_[r * k + p]);
        }
        deltamax_[p] = (hi - lo) / 2.0;
        if (deltamax_[p] <= 0.0) deltamax_[p] = 1.0;
    }
    for (auto& chain : chains_) {
        chain.shift.resize(k);
        for (std::size_t p = 0; p < k; ++p) chain.shift[p] = uniform(rng_, 0.0, deltamax_[p]);
    }
    ready_ = true;
    for (std::size_t r = 0; r < n; ++r) count(std::span<const double>(initial_.data() + r * k, k));
    initial_.clear();
    initial_.shrink_to_fit();
    swap_windows();
}

}  // namespace streamad
