#pragma once

#include <cstdint>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// Subspace outlier scoring by randomized hashing.
///
/// Each component draws a locality f ~ U(1/sqrt(s), 1 - 1/sqrt(s)), a
/// subspace of r features and shifts alpha_j ~ U(0, f). A point normalised
/// to [0, 1] by the warm-up ranges falls into the grid cell
/// floor((x_j + alpha_j) / f), j in the subspace, which is counted in
/// `n_hash_tables` count-min rows. The score is
///   -(1/m) * sum_i log(1 + min-count_i)
/// taken before the point's own cell counts are incremented. The first
/// `sample_size` events only fix the ranges and score 0.
class RSHash final : public Detector {
public:
    struct Component {
        double locality = 0.5;
        std::vector<std::uint32_t> dims;
        std::vector<double> shift;  // parallel to dims
    };

    RSHash(const RSHashParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::RSHash; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<RSHash>(*this); }
    std::size_t stored_points() const noexcept override { return ready_ ? 0 : warmup_count_; }
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.sample_size);
    }

    bool ready() const noexcept { return ready_; }
    const std::vector<Component>& components() const noexcept { return components_; }
    const std::vector<double>& range_min() const noexcept { return min_; }
    const std::vector<double>& range_max() const noexcept { return max_; }
    /// Grid cell of x in component i (after range normalisation).
    std::vector<std::int64_t> cell(std::size_t i, std::span<const double> x) const;
    /// Count-min estimate for x's cell in component i.
    std::uint32_t min_count(std::size_t i, std::span<const double> x) const;

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    std::uint64_t cell_hash(std::size_t i, std::span<const double> x) const;
    std::size_t slot(std::size_t i, std::size_t table, std::uint64_t h) const noexcept;
    void insert(std::span<const double> x);

    RSHashParams params_;
    Rng rng_;
    std::uint64_t hash_seed_;
    std::size_t dim_ = 0;
    std::vector<Component> components_;
    std::vector<double> min_, max_;
    std::vector<std::uint32_t> counts_;  // components x tables x width
    bool ready_ = false;
    std::vector<double> warmup_;
    std::size_t warmup_count_ = 0;
};

}  // namespace streamad
