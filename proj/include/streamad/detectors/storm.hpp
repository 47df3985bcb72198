#pragma once

#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"

namespace streamad {

/// Exact-STORM: the score is minus the number of points in the last
/// `window` points within Euclidean `radius` of x. Uses no randomness.
class Storm final : public Detector {
public:
    explicit Storm(const StormParams& params);

    DetectorKind kind() const noexcept override { return DetectorKind::Storm; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<Storm>(*this); }
    std::size_t stored_points() const noexcept override { return size_; }
    std::size_t point_capacity() const noexcept override { return window_; }

    std::size_t neighbor_count(std::span<const double> x) const;

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    std::size_t window_;
    double radius_sq_;
    std::size_t dim_ = 0;
    std::vector<double> ring_;
    std::size_t head_ = 0;  // next slot to overwrite
    std::size_t size_ = 0;
};

}  // namespace streamad
