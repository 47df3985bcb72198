#pragma once

#include <cstdint>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// xStream: hash-based sparse random projections followed by an ensemble of
/// half-space chains.
///
/// Each chain picks one projected dimension per depth. The first visit to a
/// dimension bins (y_f + shift_f) / deltamax_f; later visits halve the bin
/// width. Bin occupancy per depth lives in count-min sketches. A chain scores
///   -min_d [ log2(1 + count_d) + d ],  d = 1..depth,
/// which is the log of (1 + count) * 2^d. The ensemble score is the mean over
/// chains. Counts alternate between a reference window (scored against) and
/// a current window (filled), swapping every `window` events. The first
/// window fixes deltamax and shifts; until then every event scores -1.
class XStream final : public Detector {
public:
    struct Chain {
        std::vector<std::uint32_t> dims;  // per depth
        std::vector<double> shift;        // per projected dimension
    };

    XStream(const XStreamParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::XStream; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<XStream>(*this); }
    std::size_t stored_points() const noexcept override { return window_count_; }
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.window);
    }

    bool ready() const noexcept { return ready_; }
    /// Projection entry for input feature j and projected dimension p.
    double projection_entry(std::size_t j, std::size_t p) const noexcept;
    std::vector<double> project(std::span<const double> x) const;
    const std::vector<Chain>& chains() const noexcept { return chains_; }
    const std::vector<double>& deltamax() const noexcept { return deltamax_; }

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    /// Per-depth bin key hashes of projected point y for chain c.
    void bin_keys(std::size_t c, std::span<const double> y, std::vector<std::uint64_t>& keys,
                  std::vector<double>& prebins, std::vector<std::uint8_t>& seen) const;
    std::size_t cm_slot(std::size_t c, std::size_t depth, std::size_t row,
                        std::uint64_t key) const noexcept;
    void count(std::span<const double> y);
    void swap_windows();

    XStreamParams params_;
    Rng rng_;
    std::uint64_t proj_seed_;
    std::size_t dim_ = 0;
    std::vector<double> matrix_;  // k x dim
    std::vector<Chain> chains_;
    std::vector<double> deltamax_;
    std::vector<std::uint32_t> reference_, current_;
    std::size_t window_count_ = 0;
    bool ready_ = false;
    std::vector<double> initial_;  // projected first window

    // Scratch for scoring/learning; single-writer so mutable is safe.
    mutable std::vector<std::uint64_t> keys_;
    mutable std::vector<double> prebins_;
    mutable std::vector<std::uint8_t> seen_;
    mutable std::vector<std::uint32_t> touched_;
};

}  // namespace streamad
