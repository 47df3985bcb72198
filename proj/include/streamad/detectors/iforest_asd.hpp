#pragma once

#include <cstdint>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// Average unsuccessful-search path length in a binary search tree of n
/// points; normalises isolation depths.
double average_path_length(double n) noexcept;

/// Batch isolation forest over a row-major block of points.
class IsolationForest {
public:
    IsolationForest() = default;

    void fit(std::span<const double> data, std::size_t dim, int n_trees, int subsample, Rng& rng);
    bool fitted() const noexcept { return !trees_.empty(); }

    /// Mean isolation depth, leaf-size corrected.
    double expected_path_length(std::span<const double> x) const;
    /// 2^(-E[h(x)] / c(n)), where n is the per-tree sample size.
    double score(std::span<const double> x) const;

    std::size_t sample_size() const noexcept { return sample_size_; }

private:
    struct Node {
        std::int32_t feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t size = 0;
    };
    using Tree = std::vector<Node>;

    std::int32_t grow(Tree& tree, std::vector<std::size_t>& rows, std::size_t begin,
                      std::size_t end, int depth, Rng& rng);

    std::span<const double> data_;
    std::size_t dim_ = 0;
    int max_depth_ = 0;
    std::size_t sample_size_ = 0;
    std::vector<Tree> trees_;
};

/// Sliding-window isolation forest without drift detection: events are
/// buffered and a fresh forest is fitted each time the buffer reaches
/// `window`, then the buffer is cleared. Until the first fit every event
/// scores 0.5.
class IForestASD final : public Detector {
public:
    IForestASD(const IForestASDParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::IForestASD; }
    std::unique_ptr<Detector> clone() const override {
        return std::make_unique<IForestASD>(*this);
    }
    std::size_t stored_points() const noexcept override { return buffered_; }
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.window);
    }

    const IsolationForest& forest() const noexcept { return forest_; }

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    IForestASDParams params_;
    Rng rng_;
    std::size_t dim_ = 0;
    std::vector<double> buffer_;
    std::size_t buffered_ = 0;
    IsolationForest forest_;
};

}  // namespace streamad
