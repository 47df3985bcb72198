#include "streamad/detectors/ilof.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "streamad/random.hpp"

namespace streamad {

namespace {

constexpr double kDensityGuard = 1e-10;

bool closer(const auto& a, const auto& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.loc < b.loc);
}

void erase_value(std::vector<std::int32_t>& v, std::int32_t value) {
    auto it = std::find(v.begin(), v.end(), value);
    if (it != v.end()) {
        *it = v.back();
        v.pop_back();
    }
}

}  // namespace

IncrementalLOF::IncrementalLOF(const ILOFParams& params)
    : k_(static_cast<std::size_t>(params.k_neighbors)),
      max_points_(static_cast<std::size_t>(params.max_points)) {}

double IncrementalLOF::distance(const double* a, const double* b) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s);
}

std::uint64_t IncrementalLOF::key(const double* x) const noexcept {
    std::uint64_t h = 0x1f0f;
    for (std::size_t j = 0; j < dim_; ++j) {
        std::uint64_t bits;
        const double v = x[j] + 0.0;  // -0.0 -> 0.0
        std::memcpy(&bits, &v, sizeof bits);
        h = hash_combine(h, bits);
    }
    return h;
}

std::int32_t IncrementalLOF::find(const double* x) const {
    const auto [first, last] = index_.equal_range(key(x));
    for (auto it = first; it != last; ++it) {
        if (std::equal(x, x + dim_, coords(it->second))) return it->second;
    }
    return -1;
}

std::pair<double, std::size_t> IncrementalLOF::kth(const std::vector<Neighbor>& list,
                                                   std::uint32_t self_extra) const {
    std::size_t cum = self_extra;
    double kdist = 0.0;
    std::size_t i = 0;
    if (cum < k_) {
        for (; i < list.size(); ++i) {
            cum += locs_[static_cast<std::size_t>(list[i].loc)].count;
            if (cum >= k_) break;
        }
        if (i == list.size()) {
            // Fewer than k other points: everything is a neighbour.
            return {list.empty() ? 0.0 : list.back().dist, list.size()};
        }
        kdist = list[i].dist;
    }
    while (i < list.size() && list[i].dist <= kdist) ++i;
    return {kdist, i};
}

void IncrementalLOF::set_neighbors(std::int32_t u, std::vector<Neighbor> list) {
    auto& loc = locs_[static_cast<std::size_t>(u)];
    for (const auto& nb : loc.nbrs) erase_value(locs_[static_cast<std::size_t>(nb.loc)].rev, u);
    for (const auto& nb : list) locs_[static_cast<std::size_t>(nb.loc)].rev.push_back(u);
    loc.nbrs = std::move(list);
}

void IncrementalLOF::rebuild(std::int32_t u) {
    std::vector<Neighbor> list;
    list.reserve(n_locations_);
    const double* xu = coords(u);
    for (std::size_t v = 0; v < locs_.size(); ++v) {
        if (locs_[v].count == 0 || static_cast<std::int32_t>(v) == u) continue;
        list.push_back({distance(xu, coords(static_cast<std::int32_t>(v))),
                        static_cast<std::int32_t>(v)});
    }
    // Every location weighs at least 1, so the k-distance is decided by the
    // k closest; anything further only joins on a tie.
    const auto cmp = closer<Neighbor, Neighbor>;
    if (list.size() > k_) {
        const auto kth_it = list.begin() + static_cast<std::ptrdiff_t>(k_);
        std::nth_element(list.begin(), kth_it - 1, list.end(), cmp);
        std::sort(list.begin(), kth_it, cmp);
        std::vector<Neighbor> prefix(list.begin(), kth_it);
        const double kdist = kth(prefix, locs_[static_cast<std::size_t>(u)].count - 1).first;
        auto keep_end = std::partition(list.begin(), list.end(),
                                       [&](const Neighbor& nb) { return nb.dist <= kdist; });
        list.erase(keep_end, list.end());
    }
    std::sort(list.begin(), list.end(), cmp);
    const auto [kdist, keep] = kth(list, locs_[static_cast<std::size_t>(u)].count - 1);
    list.resize(keep);
    locs_[static_cast<std::size_t>(u)].kdist = kdist;
    set_neighbors(u, std::move(list));
}

void IncrementalLOF::refresh(std::int32_t u) {
    auto& loc = locs_[static_cast<std::size_t>(u)];
    const auto [kdist, keep] = kth(loc.nbrs, loc.count - 1);
    loc.kdist = kdist;
    for (std::size_t i = keep; i < loc.nbrs.size(); ++i) {
        erase_value(locs_[static_cast<std::size_t>(loc.nbrs[i].loc)].rev, u);
    }
    loc.nbrs.resize(keep);
}

void IncrementalLOF::rebuild_all() {
    for (auto& loc : locs_) {
        loc.nbrs.clear();
        loc.rev.clear();
    }
    for (std::size_t u = 0; u < locs_.size(); ++u) {
        if (locs_[u].count > 0) rebuild(static_cast<std::int32_t>(u));
    }
}

std::int32_t IncrementalLOF::create(const double* x) {
    std::int32_t loc;
    if (!free_.empty()) {
        loc = free_.back();
        free_.pop_back();
    } else {
        loc = static_cast<std::int32_t>(locs_.size());
        locs_.emplace_back();
        coords_.resize(locs_.size() * dim_);
    }
    std::copy(x, x + dim_, coords_.begin() + static_cast<std::ptrdiff_t>(loc) * static_cast<std::ptrdiff_t>(dim_));
    locs_[static_cast<std::size_t>(loc)] = Location{};
    index_.emplace(key(x), loc);
    ++n_locations_;
    return loc;
}

void IncrementalLOF::destroy(std::int32_t loc) {
    const auto [first, last] = index_.equal_range(key(coords(loc)));
    for (auto it = first; it != last; ++it) {
        if (it->second == loc) {
            index_.erase(it);
            break;
        }
    }
    auto& l = locs_[static_cast<std::size_t>(loc)];
    for (const auto& nb : l.nbrs) erase_value(locs_[static_cast<std::size_t>(nb.loc)].rev, loc);
    l = Location{};
    free_.push_back(loc);
    --n_locations_;
}

void IncrementalLOF::learn(std::span<const double> x_in) {
    std::vector<double> x(x_in.begin(), x_in.end());
    for (auto& v : x) v += 0.0;

    std::int32_t p = find(x.data());
    const bool is_new = p < 0;
    if (is_new) p = create(x.data());
    ++locs_[static_cast<std::size_t>(p)].count;
    ++n_;
    fifo_.push_back(p);

    if (n_ <= k_ + 1) {
        rebuild_all();
    } else if (is_new) {
        for (std::size_t u = 0; u < locs_.size(); ++u) {
            const auto ui = static_cast<std::int32_t>(u);
            if (locs_[u].count == 0 || ui == p) continue;
            const double d = distance(coords(ui), x.data());
            if (d > locs_[u].kdist) continue;
            auto& nbrs = locs_[u].nbrs;
            const Neighbor nb{d, p};
            nbrs.insert(std::upper_bound(nbrs.begin(), nbrs.end(), nb, closer<Neighbor, Neighbor>), nb);
            locs_[static_cast<std::size_t>(p)].rev.push_back(ui);
            refresh(ui);
        }
        rebuild(p);
    } else {
        const auto listing = locs_[static_cast<std::size_t>(p)].rev;
        for (const auto u : listing) refresh(u);
        refresh(p);
    }

    if (n_ > max_points_) remove_oldest();
}

void IncrementalLOF::remove_oldest() {
    const auto r = fifo_.front();
    fifo_.pop_front();
    --n_;
    auto affected = locs_[static_cast<std::size_t>(r)].rev;
    if (--locs_[static_cast<std::size_t>(r)].count == 0) {
        destroy(r);
    } else {
        affected.push_back(r);
    }
    if (n_ <= k_ + 1) {
        rebuild_all();
        return;
    }
    for (const auto u : affected) rebuild(u);
}

double IncrementalLOF::score(std::span<const double> x_in) const {
    if (n_ < k_) return 1.0;
    std::vector<double> x(x_in.begin(), x_in.end());
    for (auto& v : x) v += 0.0;

    const std::size_t L = locs_.size();
    dx_.assign(L, std::numeric_limits<double>::infinity());
    order_.clear();
    for (std::size_t v = 0; v < L; ++v) {
        if (locs_[v].count == 0) continue;
        dx_[v] = distance(coords(static_cast<std::int32_t>(v)), x.data());
        order_.push_back(static_cast<std::int32_t>(v));
    }
    const auto cmp = [&](std::int32_t a, std::int32_t b) {
        return dx_[static_cast<std::size_t>(a)] < dx_[static_cast<std::size_t>(b)] ||
               (dx_[static_cast<std::size_t>(a)] == dx_[static_cast<std::size_t>(b)] && a < b);
    };
    // Only the k closest can decide x's k-distance (weights are >= 1).
    const auto head = std::min(k_, order_.size());
    std::nth_element(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(head - 1),
                     order_.end(), cmp);
    std::sort(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(head), cmp);

    // k-neighbourhood of x over the stored points.
    std::size_t cum = 0;
    std::size_t end = 0;
    double kdist_x = 0.0;
    for (; end < order_.size(); ++end) {
        cum += locs_[static_cast<std::size_t>(order_[end])].count;
        if (cum >= k_) break;
    }
    kdist_x = dx_[static_cast<std::size_t>(order_[end])];
    // Pull every remaining tie to the front of the unsorted tail.
    end = static_cast<std::size_t>(
        std::partition(order_.begin() + static_cast<std::ptrdiff_t>(end + 1), order_.end(),
                       [&](std::int32_t v) { return dx_[static_cast<std::size_t>(v)] <= kdist_x; }) -
        order_.begin());

    // k-distance of a stored location once x is added.
    kd_memo_.assign(L, -1.0);
    auto kdist_after = [&](std::int32_t o) {
        auto& memo = kd_memo_[static_cast<std::size_t>(o)];
        if (memo >= 0.0) return memo;
        const auto& loc = locs_[static_cast<std::size_t>(o)];
        const double d = dx_[static_cast<std::size_t>(o)];
        // With at most k other points (x included) all of them are neighbours.
        if (n_ <= k_) return memo = std::max(loc.kdist, d);
        if (d > loc.kdist) return memo = loc.kdist;
        std::size_t c = loc.count - 1;
        if (c >= k_) return memo = 0.0;
        bool x_used = false;
        for (const auto& nb : loc.nbrs) {
            if (!x_used && d <= nb.dist) {
                x_used = true;
                if (++c >= k_) return memo = d;
            }
            c += locs_[static_cast<std::size_t>(nb.loc)].count;
            if (c >= k_) return memo = nb.dist;
        }
        // Unreachable: with more than k other points the list reaches k.
        return memo = std::max(d, loc.nbrs.empty() ? 0.0 : loc.nbrs.back().dist);
    };

    double reach_x = 0.0;
    double lrd_sum = 0.0;
    double weight_x = 0.0;
    for (std::size_t i = 0; i < end; ++i) {
        const auto v = order_[i];
        const auto& loc = locs_[static_cast<std::size_t>(v)];
        const double kv = kdist_after(v);
        const double w = loc.count;
        reach_x += w * std::max(kv, dx_[static_cast<std::size_t>(v)]);
        weight_x += w;

        // Local reachability density of v after x joins.
        double reach = (loc.count - 1.0) * kv;
        double weight = loc.count - 1.0;
        for (const auto& nb : loc.nbrs) {
            if (nb.dist > kv) break;
            const double wn = locs_[static_cast<std::size_t>(nb.loc)].count;
            reach += wn * std::max(kdist_after(nb.loc), nb.dist);
            weight += wn;
        }
        if (dx_[static_cast<std::size_t>(v)] <= kv) {
            reach += std::max(kdist_x, dx_[static_cast<std::size_t>(v)]);
            weight += 1.0;
        }
        lrd_sum += w / (reach / weight + kDensityGuard);
    }
    const double lrd_x = 1.0 / (reach_x / weight_x + kDensityGuard);
    return (lrd_sum / weight_x) / lrd_x;
}

}  // namespace streamad
