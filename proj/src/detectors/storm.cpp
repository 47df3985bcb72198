#include "streamad/detectors/storm.hpp"

#include <algorithm>

namespace streamad {

Storm::Storm(const StormParams& params)
    : window_(static_cast<std::size_t>(params.window)), radius_sq_(params.radius * params.radius) {}

void Storm::init(std::size_t dim) {
    dim_ = dim;
    ring_.assign(window_ * dim, 0.0);
}

std::size_t Storm::neighbor_count(std::span<const double> x) const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size_; ++i) {
        const double* y = ring_.data() + i * dim_;
        double d2 = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double diff = x[j] - y[j];
            d2 += diff * diff;
        }
        count += d2 <= radius_sq_;
    }
    return count;
}

double Storm::score(std::span<const double> x) const {
    if (size_ == 0) return 0.0;
    return -static_cast<double>(neighbor_count(x));
}

void Storm::learn(std::span<const double> x) {
    std::copy(x.begin(), x.end(), ring_.begin() + static_cast<std::ptrdiff_t>(head_ * dim_));
    head_ = (head_ + 1) % window_;
    size_ = std::min(size_ + 1, window_);
}

}  // namespace streamad
