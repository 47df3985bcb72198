#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// Robust random cut tree with bounding boxes on every node and
/// duplicate-count leaves.
///
/// Random cuts are derived from a caller-supplied draw key and the descent
/// level instead of generator state, so codisp_if_inserted() reproduces
/// exactly the placement that insert() with the same key will make.
class RandomCutTree {
public:
    struct Node {
        std::int32_t parent = -1;
        std::int32_t left = -1;   // -1 for leaves
        std::int32_t right = -1;
        std::int32_t cut_dim = -1;
        double cut = 0.0;
        std::uint32_t n = 0;      // points below (duplicates included)

        bool is_leaf() const noexcept { return left < 0; }
    };

    explicit RandomCutTree(std::size_t dim = 0) : dim_(dim) {}

    void insert(std::span<const double> x, std::uint64_t id, std::uint64_t draw_key);
    void forget(std::uint64_t id);

    /// Collusive displacement of a stored point.
    double codisp(std::uint64_t id) const;
    /// CoDisp x would have right after insert(x, ., draw_key). No mutation.
    double codisp_if_inserted(std::span<const double> x, std::uint64_t draw_key) const;

    std::size_t size() const noexcept { return root_ < 0 ? 0 : nodes_[root_].n; }
    std::size_t dim() const noexcept { return dim_; }
    std::int32_t root() const noexcept { return root_; }
    const Node& node(std::int32_t i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    std::int32_t leaf_of(std::uint64_t id) const;
    bool contains(std::uint64_t id) const { return leaves_.count(id) != 0; }
    std::span<const double> lower(std::int32_t i) const;
    std::span<const double> upper(std::int32_t i) const;

private:
    struct Cut {
        std::size_t dim;
        double value;
    };

    std::int32_t alloc();
    void release(std::int32_t i);
    double* lo(std::int32_t i) { return lo_.data() + static_cast<std::size_t>(i) * dim_; }
    double* hi(std::int32_t i) { return hi_.data() + static_cast<std::size_t>(i) * dim_; }
    const double* lo(std::int32_t i) const { return lo_.data() + static_cast<std::size_t>(i) * dim_; }
    const double* hi(std::int32_t i) const { return hi_.data() + static_cast<std::size_t>(i) * dim_; }
    Cut draw_cut(std::span<const double> x, std::int32_t node, std::uint64_t draw_key,
                 std::uint32_t level) const;
    std::int32_t find_duplicate(std::span<const double> x) const;
    /// Node next to which x would be placed by insert() with this key.
    std::int32_t separation_node(std::span<const double> x, std::uint64_t draw_key,
                                 Cut& cut) const;
    std::int32_t sibling(std::int32_t i) const;

    std::size_t dim_;
    std::vector<Node> nodes_;
    std::vector<double> lo_, hi_;
    std::vector<std::int32_t> free_;
    std::int32_t root_ = -1;
    std::unordered_map<std::uint64_t, std::int32_t> leaves_;
};

/// Forest of robust random cut trees, each holding the last
/// `tree_capacity` points. Score is the mean CoDisp of x over the trees as
/// if x were inserted; learning inserts x into every tree and then evicts
/// the oldest point from trees over capacity.
class RRCF final : public Detector {
public:
    RRCF(const RRCFParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::RRCF; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<RRCF>(*this); }
    std::size_t stored_points() const noexcept override;
    std::size_t point_capacity() const noexcept override {
        return static_cast<std::size_t>(params_.tree_capacity);
    }

    const std::vector<RandomCutTree>& trees() const noexcept { return trees_; }
    /// Id the next learned point will get.
    std::uint64_t next_id() const noexcept { return next_id_; }

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    std::uint64_t draw_key(std::size_t tree, std::uint64_t id) const noexcept;

    RRCFParams params_;
    std::uint64_t seed_;
    std::vector<RandomCutTree> trees_;
    std::uint64_t next_id_ = 0;
};

}  // namespace streamad
