#include "streamad/detectors/kitnet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace streamad {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

Autoencoder::Autoencoder(std::size_t n_visible, std::size_t n_hidden, double learning_rate,
                         Rng& rng)
    : n_visible_(n_visible),
      n_hidden_(n_hidden),
      lr_(learning_rate),
      W_(n_visible * n_hidden),
      hbias_(n_hidden, 0.0),
      vbias_(n_visible, 0.0),
      norm_min_(n_visible, std::numeric_limits<double>::infinity()),
      norm_max_(n_visible, -std::numeric_limits<double>::infinity()) {
    const double a = 1.0 / static_cast<double>(n_visible);
    for (auto& w : W_) w = uniform(rng, -a, a);
}

void Autoencoder::normalise(std::span<const double> x, std::vector<double>& out) const {
    out.resize(n_visible_);
    for (std::size_t i = 0; i < n_visible_; ++i) {
        out[i] = (x[i] - norm_min_[i]) / (norm_max_[i] - norm_min_[i] + 1e-16);
    }
}

double Autoencoder::forward(const std::vector<double>& v, std::vector<double>& y,
                            std::vector<double>& z) const {
    y.assign(n_hidden_, 0.0);
    for (std::size_t h = 0; h < n_hidden_; ++h) {
        double s = hbias_[h];
        for (std::size_t i = 0; i < n_visible_; ++i) s += v[i] * W_[i * n_hidden_ + h];
        y[h] = sigmoid(s);
    }
    z.assign(n_visible_, 0.0);
    double err = 0.0;
    for (std::size_t i = 0; i < n_visible_; ++i) {
        double s = vbias_[i];
        for (std::size_t h = 0; h < n_hidden_; ++h) s += W_[i * n_hidden_ + h] * y[h];
        z[i] = sigmoid(s);
        err += (v[i] - z[i]) * (v[i] - z[i]);
    }
    return std::sqrt(err / static_cast<double>(n_visible_));
}

double Autoencoder::execute(std::span<const double> x) const {
    std::vector<double> v, y, z;
    normalise(x, v);
    return forward(v, y, z);
}

double Autoencoder::train(std::span<const double> x) {
    for (std::size_t i = 0; i < n_visible_; ++i) {
        norm_min_[i] = std::min(norm_min_[i], x[i]);
        norm_max_[i] = std::max(norm_max_[i], x[i]);
    }
    std::vector<double> v, y, z;
    normalise(x, v);
    const double rmse = forward(v, y, z);

    std::vector<double> dz(n_visible_), dy(n_hidden_, 0.0);
    for (std::size_t i = 0; i < n_visible_; ++i) dz[i] = v[i] - z[i];
    for (std::size_t h = 0; h < n_hidden_; ++h) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_visible_; ++i) s += dz[i] * W_[i * n_hidden_ + h];
        dy[h] = s * y[h] * (1.0 - y[h]);
    }
    for (std::size_t i = 0; i < n_visible_; ++i) {
        for (std::size_t h = 0; h < n_hidden_; ++h) {
            W_[i * n_hidden_ + h] += lr_ * (v[i] * dy[h] + dz[i] * y[h]);
        }
        vbias_[i] += lr_ * dz[i];
    }
    for (std::size_t h = 0; h < n_hidden_; ++h) hbias_[h] += lr_ * dy[h];
    return rmse;
}

// ---------------------------------------------------------------------------

std::vector<double> correlation_distance(const std::vector<double>& c_rs,
                                         const std::vector<double>& C, std::size_t dim) {
    std::vector<double> d(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double denom = std::sqrt(c_rs[i]) * std::sqrt(c_rs[j]);
            if (denom == 0.0) denom = 1e-100;
            d[i * dim + j] = std::max(0.0, 1.0 - C[i * dim + j] / denom);
        }
    }
    return d;
}

std::vector<std::vector<std::size_t>> cluster_features(const std::vector<double>& distance,
                                                       std::size_t dim, std::size_t max_size) {
    struct Node {
        int left = -1, right = -1;
        std::vector<std::size_t> members;
    };
    std::vector<Node> nodes(dim);
    std::vector<int> active(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        nodes[i].members = {i};
        active[i] = static_cast<int>(i);
    }
    auto link = [&](const Node& a, const Node& b) {
        double best = std::numeric_limits<double>::infinity();
        for (auto i : a.members)
            for (auto j : b.members) best = std::min(best, distance[i * dim + j]);
        return best;
    };
    while (active.size() > 1) {
        std::size_t ba = 0, bb = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double d = link(nodes[static_cast<std::size_t>(active[a])],
                                      nodes[static_cast<std::size_t>(active[b])]);
                if (d < best) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        }
        Node merged;
        merged.left = active[ba];
        merged.right = active[bb];
        merged.members = nodes[static_cast<std::size_t>(merged.left)].members;
        const auto& rm = nodes[static_cast<std::size_t>(merged.right)].members;
        merged.members.insert(merged.members.end(), rm.begin(), rm.end());
        nodes.push_back(std::move(merged));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bb));
        active[ba] = static_cast<int>(nodes.size() - 1);
    }

    std::vector<std::vector<std::size_t>> groups;
    if (dim == 0) return groups;
    std::function<void(int)> cut = [&](int n) {
        const auto& node = nodes[static_cast<std::size_t>(n)];
        if (node.members.size() <= max_size || node.left < 0) {
            auto g = node.members;
            std::sort(g.begin(), g.end());
            groups.push_back(std::move(g));
            return;
        }
        cut(node.left);
        cut(node.right);
    };
    cut(active.front());
    return groups;
}

// ---------------------------------------------------------------------------

KitNet::KitNet(const KitNetParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {}

void KitNet::init(std::size_t dim) {
    c_.assign(dim, 0.0);
    c_rs_.assign(dim, 0.0);
    C_.assign(dim * dim, 0.0);
}

void KitNet::build_map() {
    const std::size_t dim = dimension();
    groups_ = cluster_features(correlation_distance(c_rs_, C_, dim), dim,
                               static_cast<std::size_t>(params_.max_autoencoder_size));
    ensemble_.clear();
    for (const auto& g : groups_) {
        const auto hidden = static_cast<std::size_t>(
            std::ceil(static_cast<double>(g.size()) * params_.hidden_ratio));
        ensemble_.emplace_back(g.size(), std::max<std::size_t>(1, hidden),
                               params_.learning_rate, rng_);
    }
    const auto hidden = static_cast<std::size_t>(
        std::ceil(static_cast<double>(groups_.size()) * params_.hidden_ratio));
    output_ = Autoencoder(groups_.size(), std::max<std::size_t>(1, hidden), params_.learning_rate,
                          rng_);
    c_.clear();
    c_rs_.clear();
    C_.clear();
}

void KitNet::gather(std::size_t group, std::span<const double> x,
                    std::vector<double>& out) const {
    out.clear();
    for (auto f : groups_[group]) out.push_back(x[f]);
}

double KitNet::score(std::span<const double> x) const {
    const auto grace = static_cast<std::uint64_t>(params_.grace_feature_map) +
                       static_cast<std::uint64_t>(params_.grace_training);
    if (n_ < grace || !mapped()) return 0.0;
    std::vector<double> sub, layer(ensemble_.size());
    for (std::size_t g = 0; g < ensemble_.size(); ++g) {
        gather(g, x, sub);
        layer[g] = ensemble_[g].execute(sub);
    }
    return output_.execute(layer);
}

void KitNet::learn(std::span<const double> x) {
    ++n_;
    if (!mapped()) {
        const std::size_t dim = dimension();
        ++fm_n_;
        std::vector<double> c_r(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            c_[i] += x[i];
            c_r[i] = x[i] - c_[i] / static_cast<double>(fm_n_);
            c_rs_[i] += c_r[i] * c_r[i];
        }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) C_[i * dim + j] += c_r[i] * c_r[j];
        if (fm_n_ >= static_cast<std::uint64_t>(params_.grace_feature_map)) build_map();
        return;
    }
    std::vector<double> sub, layer(ensemble_.size());
    for (std::size_t g = 0; g < ensemble_.size(); ++g) {
        gather(g, x, sub);
        layer[g] = ensemble_[g].train(sub);
    }
    output_.train(layer);
}

}  // namespace streamad
