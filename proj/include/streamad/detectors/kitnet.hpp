#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/random.hpp"

namespace streamad {

/// One-hidden-layer sigmoid autoencoder with tied weights and a running
/// per-input min-max normaliser, trained by plain SGD on the cross-entropy
/// reconstruction loss (as in KitNET); the score is the RMSE.
class Autoencoder {
public:
    Autoencoder() = default;
    Autoencoder(std::size_t n_visible, std::size_t n_hidden, double learning_rate, Rng& rng);

    std::size_t n_visible() const noexcept { return n_visible_; }
    std::size_t n_hidden() const noexcept { return n_hidden_; }

    /// Reconstruction RMSE of x under the current normaliser and weights.
    double execute(std::span<const double> x) const;
    /// Widens the normaliser with x, takes one SGD step, and returns the
    /// RMSE measured before the step.
    double train(std::span<const double> x);

    /// Row-major n_visible x n_hidden.
    const std::vector<double>& weights() const noexcept { return W_; }
    const std::vector<double>& hidden_bias() const noexcept { return hbias_; }
    const std::vector<double>& visible_bias() const noexcept { return vbias_; }
    const std::vector<double>& norm_min() const noexcept { return norm_min_; }
    const std::vector<double>& norm_max() const noexcept { return norm_max_; }

private:
    void normalise(std::span<const double> x, std::vector<double>& out) const;
    double forward(const std::vector<double>& v, std::vector<double>& y,
                   std::vector<double>& z) const;

    std::size_t n_visible_ = 0;
    std::size_t n_hidden_ = 0;
    double lr_ = 0.1;
    std::vector<double> W_, hbias_, vbias_;
    std::vector<double> norm_min_, norm_max_;
};

/// Autoencoder ensemble in the style of KitNET. The first grace_feature_map
/// vectors only feed correlation statistics; the features are then grouped
/// by single-linkage clustering on correlation distance into groups of at
/// most max_autoencoder_size. Each group has its own autoencoder and their
/// RMSEs feed an output autoencoder whose RMSE is the score. Scores are 0
/// until both grace periods have passed; learning never stops.
class KitNet final : public Detector {
public:
    KitNet(const KitNetParams& params, std::uint64_t seed);

    DetectorKind kind() const noexcept override { return DetectorKind::KitNet; }
    std::unique_ptr<Detector> clone() const override { return std::make_unique<KitNet>(*this); }

    bool mapped() const noexcept { return !groups_.empty(); }
    const std::vector<std::vector<std::size_t>>& feature_groups() const noexcept { return groups_; }
    const std::vector<Autoencoder>& ensemble() const noexcept { return ensemble_; }
    const Autoencoder& output_layer() const noexcept { return output_; }
    std::uint64_t seen() const noexcept { return n_; }

protected:
    void init(std::size_t dim) override;
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    void build_map();
    void gather(std::size_t group, std::span<const double> x, std::vector<double>& out) const;

    KitNetParams params_;
    Rng rng_;
    std::uint64_t n_ = 0;

    // Feature-map statistics.
    std::vector<double> c_, c_rs_, C_;
    std::uint64_t fm_n_ = 0;

    std::vector<std::vector<std::size_t>> groups_;
    std::vector<Autoencoder> ensemble_;
    Autoencoder output_;
};

/// 1 - Pearson correlation from KitNET's running sums, clipped at 0.
/// Exposed for tests. `C` is dim x dim row-major.
std::vector<double> correlation_distance(const std::vector<double>& c_rs,
                                         const std::vector<double>& C, std::size_t dim);

/// Single-linkage dendrogram cut top-down until every cluster has at most
/// max_size members. Groups are returned in dendrogram order.
std::vector<std::vector<std::size_t>> cluster_features(const std::vector<double>& distance,
                                                       std::size_t dim, std::size_t max_size);

}  // namespace streamad
