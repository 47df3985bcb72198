#include "streamad/params.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <variant>
#include <vector>

namespace streamad {

namespace {

struct Field {
    std::string key;
    std::variant<int*, double*> target;
};

std::vector<Field> fields(DetectorParams& p) {
    return {
        {"hstree.n_trees", &p.hstree.n_trees},
        {"hstree.depth", &p.hstree.depth},
        {"hstree.window", &p.hstree.window},
        {"iforestasd.window", &p.iforestasd.window},
        {"iforestasd.n_trees", &p.iforestasd.n_trees},
        {"iforestasd.subsample", &p.iforestasd.subsample},
        {"ilof.k_neighbors", &p.ilof.k_neighbors},
        {"ilof.max_points", &p.ilof.max_points},
        {"kitnet.max_autoencoder_size", &p.kitnet.max_autoencoder_size},
        {"kitnet.grace_feature_map", &p.kitnet.grace_feature_map},
        {"kitnet.grace_training", &p.kitnet.grace_training},
        {"kitnet.learning_rate", &p.kitnet.learning_rate},
        {"kitnet.hidden_ratio", &p.kitnet.hidden_ratio},
        {"loda.n_projections", &p.loda.n_projections},
        {"loda.n_bins", &p.loda.n_bins},
        {"loda.window", &p.loda.window},
        {"loda.sparsity", &p.loda.sparsity},
        {"ocsvm.nu", &p.ocsvm.nu},
        {"ocsvm.learning_rate", &p.ocsvm.learning_rate},
        {"ocsvm.power_t", &p.ocsvm.power_t},
        {"rrcf.n_trees", &p.rrcf.n_trees},
        {"rrcf.tree_capacity", &p.rrcf.tree_capacity},
        {"rshash.n_components", &p.rshash.n_components},
        {"rshash.sample_size", &p.rshash.sample_size},
        {"rshash.n_hash_tables", &p.rshash.n_hash_tables},
        {"rshash.table_bits", &p.rshash.table_bits},
        {"storm.window", &p.storm.window},
        {"storm.radius", &p.storm.radius},
        {"xstream.n_projections", &p.xstream.n_projections},
        {"xstream.n_chains", &p.xstream.n_chains},
        {"xstream.chain_depth", &p.xstream.chain_depth},
        {"xstream.window", &p.xstream.window},
        {"xstream.cm_rows", &p.xstream.cm_rows},
        {"xstream.cm_bits", &p.xstream.cm_bits},
    };
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

void require(bool ok, const char* field, const char* reason) {
    if (!ok) throw InvalidParameter(field, reason);
}

}  // namespace

void DetectorParams::validate(DetectorKind kind) const {
    switch (kind) {
    case DetectorKind::HSTree:
        require(hstree.n_trees >= 1, "hstree.n_trees", "must be >= 1");
        require(hstree.depth >= 1 && hstree.depth <= 24, "hstree.depth", "must be in [1, 24]");
        require(hstree.window >= 2, "hstree.window", "must be >= 2");
        break;
    case DetectorKind::IForestASD:
        require(iforestasd.window >= 2, "iforestasd.window", "must be >= 2");
        require(iforestasd.n_trees >= 1, "iforestasd.n_trees", "must be >= 1");
        require(iforestasd.subsample >= 2, "iforestasd.subsample", "must be >= 2");
        break;
    case DetectorKind::ILOF:
        require(ilof.k_neighbors >= 1, "ilof.k_neighbors", "must be >= 1");
        require(ilof.max_points > ilof.k_neighbors, "ilof.max_points",
                "must exceed k_neighbors");
        break;
    case DetectorKind::KitNet:
        require(kitnet.max_autoencoder_size >= 1, "kitnet.max_autoencoder_size", "must be >= 1");
        require(kitnet.grace_feature_map >= 1, "kitnet.grace_feature_map", "must be >= 1");
        require(kitnet.grace_training >= 1, "kitnet.grace_training", "must be >= 1");
        require(kitnet.learning_rate > 0.0, "kitnet.learning_rate", "must be > 0");
        require(kitnet.hidden_ratio > 0.0 && kitnet.hidden_ratio < 1.0, "kitnet.hidden_ratio",
                "must be in (0, 1)");
        break;
    case DetectorKind::LODA:
        require(loda.n_projections >= 1, "loda.n_projections", "must be >= 1");
        require(loda.n_bins >= 1, "loda.n_bins", "must be >= 1");
        require(loda.window >= 2, "loda.window", "must be >= 2");
        require(loda.sparsity >= 0, "loda.sparsity", "must be >= 0");
        break;
    case DetectorKind::OCSVM:
        require(ocsvm.nu > 0.0 && ocsvm.nu <= 1.0, "ocsvm.nu", "must be in (0, 1]");
        require(ocsvm.learning_rate > 0.0, "ocsvm.learning_rate", "must be > 0");
        require(ocsvm.power_t >= 0.0, "ocsvm.power_t", "must be >= 0");
        break;
    case DetectorKind::RRCF:
        require(rrcf.n_trees >= 1, "rrcf.n_trees", "must be >= 1");
        require(rrcf.tree_capacity >= 2, "rrcf.tree_capacity", "must be >= 2");
        break;
    case DetectorKind::RSHash:
        require(rshash.n_components >= 1, "rshash.n_components", "must be >= 1");
        require(rshash.sample_size >= 2, "rshash.sample_size", "must be >= 2");
        require(rshash.n_hash_tables >= 1, "rshash.n_hash_tables", "must be >= 1");
        require(rshash.table_bits >= 1 && rshash.table_bits <= 30, "rshash.table_bits",
                "must be in [1, 30]");
        break;
    case DetectorKind::Storm:
        require(storm.window >= 2, "storm.window", "must be >= 2");
        require(storm.radius > 0.0, "storm.radius", "must be > 0");
        break;
    case DetectorKind::XStream:
        require(xstream.n_projections >= 1, "xstream.n_projections", "must be >= 1");
        require(xstream.n_chains >= 1, "xstream.n_chains", "must be >= 1");
        require(xstream.chain_depth >= 1, "xstream.chain_depth", "must be >= 1");
        require(xstream.window >= 2, "xstream.window", "must be >= 2");
        require(xstream.cm_rows >= 1, "xstream.cm_rows", "must be >= 1");
        require(xstream.cm_bits >= 1 && xstream.cm_bits <= 28, "xstream.cm_bits",
                "must be in [1, 28]");
        break;
    }
}

void DetectorParams::set(std::string_view key, std::string_view value) {
    for (auto& f : fields(*this)) {
        if (f.key != key) continue;
        const auto* first = value.data();
        const auto* last = value.data() + value.size();
        std::from_chars_result res{};
        if (auto** ip = std::get_if<int*>(&f.target)) {
            res = std::from_chars(first, last, **ip);
        } else {
            res = std::from_chars(first, last, *std::get<double*>(f.target));
        }
        if (res.ec != std::errc{} || res.ptr != last) {
            throw InvalidParameter(std::string(key), "cannot parse '" + std::string(value) + "'");
        }
        return;
    }
    throw InvalidParameter(std::string(key), "unknown key");
}

DetectorParams parse_params(std::istream& in) {
    DetectorParams params;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidParameter(std::string(view), "expected 'key = value'");
        }
        params.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
    return params;
}

DetectorParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open params file: " + path.string());
    return parse_params(in);
}

void write_params(std::ostream& out, const DetectorParams& params) {
    auto copy = params;
    for (const auto& f : fields(copy)) {
        out << f.key << " = ";
        // Shortest representation that parses back to the same value.
        char buf[32];
        const auto res = std::visit(
            [&](auto* v) { return std::to_chars(buf, buf + sizeof buf, *v); }, f.target);
        out.write(buf, res.ptr - buf);
        out << '\n';
    }
}

}  // namespace streamad
