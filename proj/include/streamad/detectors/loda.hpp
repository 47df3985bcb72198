#pragma once

#include <cstdint>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// Lightweight on-line detector of anomalies: an ensemble of sparse random
/// projections, each with an equal-width histogram.
///
///   score(x) = (1/k) * sum_i [ log(N + B) - log(count_i(bin(w_i.x)) + 1) ]
///
/// i.e. the mean negative log of the Laplace-smoothed bin probability.
/// Histogram ranges are fixed from the first `window` events; those events
/// are then counted and every later event updates the histograms. During
/// the warm-up every score is log(B).
class LODA final : public Detector {
public:
    struct Projection {
        std::vector<std::uint32_t> index;
        std::vector<double> weight;
        double lo = 0.0;
        double width = 1.0;
    };

    LODA(const LODAParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::LODA; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<LODA>(*this); }
    std::size_t stored_points() const noexcept override { return ready_ ? 0 : warmup_count_; }
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.window);
    }

    bool ready() const noexcept { return ready_; }
    const std::vector<Projection>& projections() const noexcept { return projections_; }
    std::size_t bin_of(std::size_t projection, double z) const noexcept;

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    double project(std::size_t i, std::span<const double> x) const noexcept;
    void add(std::size_t i, double z) noexcept;

    LODAParams params_;
    Rng rng_;
    std::vector<Projection> projections_;
    std::vector<std::uint32_t> counts_;  // k x bins
    std::uint64_t total_ = 0;
    bool ready_ = false;
    std::vector<double> warmup_;  // window x k projected values
    std::size_t warmup_count_ = 0;
};

}  // namespace streamad
