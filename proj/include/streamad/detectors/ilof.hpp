#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"

namespace streamad {

/// Incremental local outlier factor over a sliding memory of `max_points`.
///
/// The score of x is LOF_k(x) in memory + {x}, exactly as a batch LOF
/// recomputed after inserting x would give it. k-neighbourhoods include all
/// points tied with the k-th distance. Reachability densities carry a 1e-10
/// guard so exact duplicates stay finite.
///
/// Identical vectors share one stored location with a multiplicity, so
/// neighbourhood maintenance scales with distinct points, not with copies.
/// Only k-distances and neighbour lists are maintained; densities needed
/// for a score are derived on demand.
class IncrementalLOF final : public Detector {
public:
    explicit IncrementalLOF(const ILOFParams& params);

    DetectorKind kind() const noexcept override { return DetectorKind::ILOF; }
    std::unique_ptr<Detector> clone() const override {
        return std::make_unique<IncrementalLOF>(*this);
    }
    std::size_t stored_points() const noexcept override { return n_; }
    std::size_t point_capacity() const noexcept override { return max_points_; }

    std::size_t distinct_points() const noexcept { return n_locations_; }

protected:
    void init(std::size_t dim) override { dim_ = dim; }
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    struct Neighbor {
        double dist;
        std::int32_t loc;
    };
    struct Location {
        std::uint32_t count = 0;
        double kdist = 0.0;
        std::vector<Neighbor> nbrs;      // other locations within kdist, sorted
        std::vector<std::int32_t> rev;   // locations listing this one in nbrs
    };

    const double* coords(std::int32_t loc) const {
        return coords_.data() + static_cast<std::size_t>(loc) * dim_;
    }
    double distance(const double* a, const double* b) const noexcept;
    std::uint64_t key(const double* x) const noexcept;
    std::int32_t find(const double* x) const;

    /// k-distance and kept prefix length of a sorted candidate list.
    std::pair<double, std::size_t> kth(const std::vector<Neighbor>& list,
                                       std::uint32_t self_extra) const;
    void set_neighbors(std::int32_t u, std::vector<Neighbor> list);
    void rebuild(std::int32_t u);
    void refresh(std::int32_t u);
    void rebuild_all();
    void remove_oldest();
    std::int32_t create(const double* x);
    void destroy(std::int32_t loc);

    std::size_t k_;
    std::size_t max_points_;
    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<Location> locs_;
    std::vector<std::int32_t> free_;
    std::unordered_multimap<std::uint64_t, std::int32_t> index_;
    std::deque<std::int32_t> fifo_;
    std::size_t n_ = 0;
    std::size_t n_locations_ = 0;

    // Scoring scratch.
    mutable std::vector<double> dx_;
    mutable std::vector<double> kd_memo_;
    mutable std::vector<std::int32_t> order_;
};

}  // namespace streamad
