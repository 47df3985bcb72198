#include "streamad/detectors/hstree.hpp"

#include <algorithm>
#include <cmath>

namespace streamad {

namespace {
constexpr double kPadding = 0.15;
}

HalfSpaceTrees::HalfSpaceTrees(const HSTreeParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {}

double HalfSpaceTrees::max_score() const noexcept {
    return static_cast<double>(params_.n_trees) * params_.window *
           (std::ldexp(1.0, params_.depth + 1) - 1.0);
}

void HalfSpaceTrees::init(std::size_t dim) {
    trees_.resize(static_cast<std::size_t>(params_.n_trees));
    for (auto& tree : trees_) {
        tree.feature.assign(internal_nodes(), 0);
        tree.threshold.assign(internal_nodes(), 0.0);
        tree.l_mass.assign(total_nodes(), 0);
        tree.r_mass.assign(total_nodes(), 0);
        std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
        build(tree, 0, params_.depth, lo, hi);
    }
}

void HalfSpaceTrees::build(Tree& tree, std::size_t node, int height, std::vector<double>& lo,
                           std::vector<double>& hi) {
    if (height == 0) return;
    std::vector<double> widths(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) widths[j] = hi[j] - lo[j];
    const auto on = std::discrete_distribution<std::size_t>(widths.begin(), widths.end())(rng_);
    const double a = lo[on];
    const double b = hi[on];
    const double at = uniform(rng_, a + kPadding * (b - a), b - kPadding * (b - a));
    tree.feature[node] = static_cast<std::int32_t>(on);
    tree.threshold[node] = at;

    hi[on] = at;
    build(tree, 2 * node + 1, height - 1, lo, hi);
    hi[on] = b;
    lo[on] = at;
    build(tree, 2 * node + 2, height - 1, lo, hi);
    lo[on] = a;
}

double HalfSpaceTrees::score(std::span<const double> x) const {
    const double limit = size_limit();
    const std::size_t n_internal = internal_nodes();
    double total = 0.0;
    for (const auto& tree : trees_) {
        std::size_t node = 0;
        for (int depth = 0;; ++depth) {
            const double mass = tree.r_mass[node];
            total += mass * std::ldexp(1.0, depth);
            if (mass < limit || node >= n_internal) break;
            node = x[tree.feature[node]] < tree.threshold[node] ? 2 * node + 1 : 2 * node + 2;
        }
    }
    return 1.0 - total / max_score();
}

void HalfSpaceTrees::learn(std::span<const double> x) {
    const std::size_t n_internal = internal_nodes();
    for (auto& tree : trees_) {
        std::size_t node = 0;
        while (true) {
            ++tree.l_mass[node];
            if (node >= n_internal) break;
            node = x[tree.feature[node]] < tree.threshold[node] ? 2 * node + 1 : 2 * node + 2;
        }
    }
    if (++counter_ == static_cast<std::size_t>(params_.window)) {
        for (auto& tree : trees_) {
            tree.r_mass.swap(tree.l_mass);
            std::fill(tree.l_mass.begin(), tree.l_mass.end(), 0u);
        }
        counter_ = 0;
    }
}

}  // namespace streamad
