#pragma once

#include <cstdint>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// Streaming half-space trees over inputs scaled to [0, 1]^D.
///
/// Each tree is a complete binary tree of height `depth` stored in heap
/// order (children of i are 2i+1, 2i+2). Split features are drawn in
/// proportion to the width of the node's current range and thresholds are
/// drawn inside the middle 70% of that range. Mass from the latest window
/// becomes the reference mass every `window` events.
///
/// Score is 1 - sum(r_mass * 2^depth) / max_score along each path, stopping
/// early where r_mass < 0.1 * window. Before the first window completes all
/// reference masses are zero and every event scores 1.
class HalfSpaceTrees final : public Detector {
public:
    struct Tree {
        std::vector<std::int32_t> feature;   // internal nodes only
        std::vector<double> threshold;       // internal nodes only
        std::vector<std::uint32_t> l_mass;   // latest window
        std::vector<std::uint32_t> r_mass;   // reference window
    };

    HalfSpaceTrees(const HSTreeParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::HSTree; }
    std::unique_ptr<Detector> clone() const override {
        return std::make_unique<HalfSpaceTrees>(*this);
    }
    std::size_t stored_points() const noexcept override { return counter_; }
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.window);
    }

    const HSTreeParams& params() const noexcept { return params_; }
    const std::vector<Tree>& trees() const noexcept { return trees_; }
    double size_limit() const noexcept { return 0.1 * params_.window; }
    double max_score() const noexcept;
    std::size_t internal_nodes() const noexcept { return (std::size_t{1} << params_.depth) - 1; }
    std::size_t total_nodes() const noexcept {
        return (std::size_t{1} << (params_.depth + 1)) - 1;
    }

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    void build(Tree& tree, std::size_t node, int height, std::vector<double>& lo,
               std::vector<double>& hi);

    HSTreeParams params_;
    Rng rng_;
    std::vector<Tree> trees_;
    std::size_t counter_ = 0;
};

}  // namespace streamad
