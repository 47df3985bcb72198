#include "streamad/detectors/rrcf.hpp"

#include <algorithm>
#include <cmath>

namespace streamad {

std::int32_t RandomCutTree::alloc() {
    if (!free_.empty()) {
        const auto i = free_.back();
        free_.pop_back();
        nodes_[static_cast<std::size_t>(i)] = Node{};
        return i;
    }
    nodes_.emplace_back();
    lo_.resize(nodes_.size() * dim_);
    hi_.resize(nodes_.size() * dim_);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

void RandomCutTree::release(std::int32_t i) { free_.push_back(i); }

std::span<const double> RandomCutTree::lower(std::int32_t i) const { return {lo(i), dim_}; }
std::span<const double> RandomCutTree::upper(std::int32_t i) const { return {hi(i), dim_}; }

std::int32_t RandomCutTree::leaf_of(std::uint64_t id) const { return leaves_.at(id); }

std::int32_t RandomCutTree::sibling(std::int32_t i) const {
    const auto& p = nodes_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(i)].parent)];
    return p.left == i ? p.right : p.left;
}

RandomCutTree::Cut RandomCutTree::draw_cut(std::span<const double> x, std::int32_t node,
                                           std::uint64_t draw_key, std::uint32_t level) const {
    const double* l = lo(node);
    const double* h = hi(node);
    double total = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        total += std::max(h[j], x[j]) - std::min(l[j], x[j]);
    }
    const double r = (1.0 - unit_interval(hash_combine(draw_key, level))) * total;
    double cum = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double lo_j = std::min(l[j], x[j]);
        const double hi_j = std::max(h[j], x[j]);
        cum += hi_j - lo_j;
        if (cum >= r) {
            // Keep the cut in [lo_j, hi_j) despite rounding in the cumsum.
            const double v = lo_j + (cum - r);
            return {j, v >= hi_j ? std::nextafter(hi_j, lo_j) : v};
        }
    }
    // Unreachable for distinct points: cum reaches total on the last dimension.
    const std::size_t j = dim_ - 1;
    return {j, std::min(l[j], x[j])};
}

std::int32_t RandomCutTree::find_duplicate(std::span<const double> x) const {
    if (root_ < 0) return -1;
    std::int32_t i = root_;
    while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        i = x[static_cast<std::size_t>(n.cut_dim)] <= n.cut ? n.left : n.right;
    }
    return std::equal(x.begin(), x.end(), lo(i)) ? i : -1;
}

std::int32_t RandomCutTree::separation_node(std::span<const double> x, std::uint64_t draw_key,
                                            Cut& cut) const {
    std::int32_t i = root_;
    for (std::uint32_t level = 0;; ++level) {
        cut = draw_cut(x, i, draw_key, level);
        if (cut.value <= lo(i)[cut.dim] || cut.value >= hi(i)[cut.dim]) return i;
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        i = x[static_cast<std::size_t>(n.cut_dim)] <= n.cut ? n.left : n.right;
    }
}

void RandomCutTree::insert(std::span<const double> x, std::uint64_t id, std::uint64_t draw_key) {
    if (root_ < 0) {
        const auto leaf = alloc();
        std::copy(x.begin(), x.end(), lo(leaf));
        std::copy(x.begin(), x.end(), hi(leaf));
        nodes_[static_cast<std::size_t>(leaf)].n = 1;
        root_ = leaf;
        leaves_[id] = leaf;
        return;
    }
    if (const auto dup = find_duplicate(x); dup >= 0) {
        for (auto a = dup; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
            ++nodes_[static_cast<std::size_t>(a)].n;
        }
        leaves_[id] = dup;
        return;
    }

    Cut cut{};
    const auto sep = separation_node(x, draw_key, cut);
    const bool leaf_on_left = cut.value <= lo(sep)[cut.dim];

    const auto leaf = alloc();
    const auto branch = alloc();
    std::copy(x.begin(), x.end(), lo(leaf));
    std::copy(x.begin(), x.end(), hi(leaf));
    for (std::size_t j = 0; j < dim_; ++j) {
        lo(branch)[j] = std::min(lo(sep)[j], x[j]);
        hi(branch)[j] = std::max(hi(sep)[j], x[j]);
    }

    const auto parent = nodes_[static_cast<std::size_t>(sep)].parent;
    auto& lf = nodes_[static_cast<std::size_t>(leaf)];
    lf.n = 1;
    lf.parent = branch;
    auto& br = nodes_[static_cast<std::size_t>(branch)];
    br.cut_dim = static_cast<std::int32_t>(cut.dim);
    br.cut = cut.value;
    br.left = leaf_on_left ? leaf : sep;
    br.right = leaf_on_left ? sep : leaf;
    br.n = nodes_[static_cast<std::size_t>(sep)].n + 1;
    br.parent = parent;
    nodes_[static_cast<std::size_t>(sep)].parent = branch;

    if (parent < 0) {
        root_ = branch;
    } else {
        auto& p = nodes_[static_cast<std::size_t>(parent)];
        (p.left == sep ? p.left : p.right) = branch;
    }
    for (auto a = parent; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
        ++nodes_[static_cast<std::size_t>(a)].n;
        for (std::size_t j = 0; j < dim_; ++j) {
            lo(a)[j] = std::min(lo(a)[j], x[j]);
            hi(a)[j] = std::max(hi(a)[j], x[j]);
        }
    }
    leaves_[id] = leaf;
}

void RandomCutTree::forget(std::uint64_t id) {
    const auto it = leaves_.find(id);
    if (it == leaves_.end()) throw Error("rrcf: unknown point id " + std::to_string(id));
    const auto leaf = it->second;
    leaves_.erase(it);

    if (nodes_[static_cast<std::size_t>(leaf)].n > 1) {
        for (auto a = leaf; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
            --nodes_[static_cast<std::size_t>(a)].n;
        }
        return;
    }
    if (leaf == root_) {
        release(leaf);
        root_ = -1;
        return;
    }

    const auto parent = nodes_[static_cast<std::size_t>(leaf)].parent;
    const auto sib = sibling(leaf);
    const auto grand = nodes_[static_cast<std::size_t>(parent)].parent;
    nodes_[static_cast<std::size_t>(sib)].parent = grand;
    if (grand < 0) {
        root_ = sib;
    } else {
        auto& g = nodes_[static_cast<std::size_t>(grand)];
        (g.left == parent ? g.left : g.right) = sib;
    }
    for (auto a = grand; a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
        auto& n = nodes_[static_cast<std::size_t>(a)];
        --n.n;
        for (std::size_t j = 0; j < dim_; ++j) {
            lo(a)[j] = std::min(lo(n.left)[j], lo(n.right)[j]);
            hi(a)[j] = std::max(hi(n.left)[j], hi(n.right)[j]);
        }
    }
    release(leaf);
    release(parent);
}

double RandomCutTree::codisp(std::uint64_t id) const {
    auto node = leaves_.at(id);
    double best = 0.0;
    while (nodes_[static_cast<std::size_t>(node)].parent >= 0) {
        const double ratio = static_cast<double>(nodes_[static_cast<std::size_t>(sibling(node))].n) /
                             nodes_[static_cast<std::size_t>(node)].n;
        best = std::max(best, ratio);
        node = nodes_[static_cast<std::size_t>(node)].parent;
    }
    return best;
}

double RandomCutTree::codisp_if_inserted(std::span<const double> x, std::uint64_t draw_key) const {
    if (root_ < 0) return 0.0;
    double best = 0.0;
    std::int32_t node = find_duplicate(x);
    if (node < 0) {
        Cut cut{};
        node = separation_node(x, draw_key, cut);
        // x becomes the sibling of `node` under a fresh branch.
        best = static_cast<double>(nodes_[static_cast<std::size_t>(node)].n);
    }
    // Every subtree on x's path gains one point.
    while (nodes_[static_cast<std::size_t>(node)].parent >= 0) {
        const double ratio =
            static_cast<double>(nodes_[static_cast<std::size_t>(sibling(node))].n) /
            (nodes_[static_cast<std::size_t>(node)].n + 1.0);
        best = std::max(best, ratio);
        node = nodes_[static_cast<std::size_t>(node)].parent;
    }
    return best;
}

// ---------------------------------------------------------------------------

RRCF::RRCF(const RRCFParams& params, std::uint64_t seed) : params_(params), seed_(seed) {}

void RRCF::init(std::size_t dim) {
    trees_.assign(static_cast<std::size_t>(params_.n_trees), RandomCutTree(dim));
}

std::uint64_t RRCF::draw_key(std::size_t tree, std::uint64_t id) const noexcept {
    return hash_combine(hash_combine(mix64(seed_), tree), id);
}

std::size_t RRCF::stored_points() const noexcept {
    std::size_t most = 0;
    for (const auto& t : trees_) most = std::max(most, t.size());
    return most;
}

double RRCF::score(std::span<const double> x) const {
    double total = 0.0;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        total += trees_[t].codisp_if_inserted(x, draw_key(t, next_id_));
    }
    return total / static_cast<double>(trees_.size());
}

void RRCF::learn(std::span<const double> x) {
    const auto capacity = static_cast<std::size_t>(params_.tree_capacity);
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        auto& tree = trees_[t];
        tree.insert(x, next_id_, draw_key(t, next_id_));
        if (tree.size() > capacity) tree.forget(next_id_ - capacity);
    }
    ++next_id_;
}

}  // namespace streamad
