#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "streamad/core.hpp"

namespace streamad {

struct HSTreeParams {
    int n_trees = 25;
    int depth = 15;
    int window = 250;
};

struct IForestASDParams {
    int window = 1024;
    int n_trees = 100;
    int subsample = 256;
};

struct ILOFParams {
    int k_neighbors = 10;
    int max_points = 2000;
};

struct KitNetParams {
    int max_autoencoder_size = 10;
    int grace_feature_map = 5000;
    int grace_training = 10000;
    double learning_rate = 0.1;
    double hidden_ratio = 0.75;
};

struct LODAParams {
    int n_projections = 100;
    int n_bins = 100;
    int window = 256;  // warm-up buffer that fixes histogram ranges
    int sparsity = 0;  // non-zeros per projection; 0 means ceil(sqrt(D))
};

struct OCSVMParams {
    double nu = 0.1;
    double learning_rate = 0.01;
    double power_t = 0.25;  // eta_t = learning_rate / t^power_t
};

struct RRCFParams {
    int n_trees = 40;
    int tree_capacity = 256;
};

struct RSHashParams {
    int n_components = 100;
    int sample_size = 1000;
    int n_hash_tables = 4;
    int table_bits = 15;
};

struct StormParams {
    int window = 1000;
    double radius = 0.1;
};

struct XStreamParams {
    int n_projections = 50;
    int n_chains = 50;
    int chain_depth = 10;
    int window = 512;
    int cm_rows = 2;
    int cm_bits = 12;
};

/// Hyperparameters for all ten detectors. Only the block matching the
/// detector kind is consulted.
struct DetectorParams {
    HSTreeParams hstree;
    IForestASDParams iforestasd;
    ILOFParams ilof;
    KitNetParams kitnet;
    LODAParams loda;
    OCSVMParams ocsvm;
    RRCFParams rrcf;
    RSHashParams rshash;
    StormParams storm;
    XStreamParams xstream;

    /// Throws InvalidParameter naming the offending field.
    void validate(DetectorKind kind) const;

    /// Set one value from a dotted key such as "storm.radius".
    void set(std::string_view key, std::string_view value);
};

/// Key-value ledger format, one `kind.field = value` per line, `#` comments.
DetectorParams load_params(const std::filesystem::path& path);
DetectorParams parse_params(std::istream& in);
void write_params(std::ostream& out, const DetectorParams& params);

}  // namespace streamad
