#pragma once

// Brute-force reference computations used by the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "streamad/detectors/rrcf.hpp"

namespace streamad::oracle {

using Points = std::vector<std::vector<double>>;

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// LOF of the last point, recomputed from scratch over all instances
/// (duplicates included, k-distance ties join the neighbourhood).
inline double batch_lof_of_last(const Points& pts, std::size_t k) {
    const std::size_t n = pts.size();
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = euclid(pts[i], pts[j]);
    std::vector<double> kdist(n);
    std::vector<double> others;
    for (std::size_t i = 0; i < n; ++i) {
        others.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) others.push_back(d[i * n + j]);
        std::sort(others.begin(), others.end());
        kdist[i] = others[std::min(k, others.size()) - 1];
    }
    auto lrd = [&](std::size_t i) {
        double reach = 0;
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || d[i * n + j] > kdist[i]) continue;
            reach += std::max(kdist[j], d[i * n + j]);
            ++m;
        }
        return 1.0 / (reach / static_cast<double>(m) + 1e-10);
    };
    const std::size_t x = n - 1;
    double s = 0;
    std::size_t m = 0;
    for (std::size_t j = 0; j < x; ++j) {
        if (d[x * n + j] > kdist[x]) continue;
        s += lrd(j);
        ++m;
    }
    return s / static_cast<double>(m) / lrd(x);
}

/// Points of the last `window` events within `radius` of pts[i].
inline std::size_t window_neighbours(const Points& pts, std::size_t i, std::size_t window,
                                     double radius) {
    std::size_t c = 0;
    for (std::size_t j = i > window ? i - window : 0; j < i; ++j) c += euclid(pts[i], pts[j]) <= radius;
    return c;
}

/// Pairwise Mann-Whitney count: P(score_pos > score_neg) + 0.5 P(tie).
inline double pairwise_auc(std::span<const double> s, std::span<const std::uint8_t> y) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!y[i]) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j]) continue;
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    }
    return wins / pairs;
}

/// Points below `node`, from leaf multiplicities alone.
inline std::size_t subtree_size(const RandomCutTree& t, std::int32_t node,
                                const std::map<std::int32_t, std::size_t>& mult) {
    const auto& n = t.node(node);
    if (n.is_leaf()) {
        const auto it = mult.find(node);
        return it == mult.end() ? 0 : it->second;
    }
    return subtree_size(t, n.left, mult) + subtree_size(t, n.right, mult);
}

/// Collusive displacement by enumerating every ancestor of the point's leaf
/// and counting the subtrees explicitly.
inline double codisp(const RandomCutTree& t, std::uint64_t id,
                     const std::vector<std::uint64_t>& ids) {
    std::map<std::int32_t, std::size_t> mult;
    for (auto i : ids) ++mult[t.leaf_of(i)];
    std::int32_t node = t.leaf_of(id);
    double best = 0;
    while (t.node(node).parent >= 0) {
        const auto& p = t.node(t.node(node).parent);
        const std::int32_t sib = p.left == node ? p.right : p.left;
        best = std::max(best, static_cast<double>(subtree_size(t, sib, mult)) /
                                  static_cast<double>(subtree_size(t, node, mult)));
        node = t.node(node).parent;
    }
    return best;
}

}  // namespace streamad::oracle
