#include "streamad/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace streamad {

std::string_view to_string(DetectorKind kind) noexcept {
    switch (kind) {
    case DetectorKind::HSTree: return "HSTree";
    case DetectorKind::IForestASD: return "IForestASD";
    case DetectorKind::ILOF: return "ILOF";
    case DetectorKind::KitNet: return "KitNet";
    case DetectorKind::LODA: return "LODA";
    case DetectorKind::OCSVM: return "OCSVM";
    case DetectorKind::RRCF: return "RRCF";
    case DetectorKind::RSHash: return "RS-Hash";
    case DetectorKind::Storm: return "Storm";
    case DetectorKind::XStream: return "xStream";
    }
    return "?";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (auto kind : kAllDetectorKinds) {
        std::string canonical;
        for (char c : to_string(kind)) {
            if (c == '-') continue;
            canonical.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        if (canonical == key) return kind;
    }
    return std::nullopt;
}

void Detector::check(std::span<const double> x) {
    if (dim_ == 0) {
        if (x.empty()) throw DimensionMismatch(1, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i])) throw NonFiniteInput(i);
        }
        init(x.size());
        dim_ = x.size();
        return;
    }
    if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw NonFiniteInput(i);
    }
}

double Detector::process_one(std::span<const double> x) {
    check(x);
    const double s = score(x);
    learn(x);
    return s;
}

double Detector::score_one(std::span<const double> x) {
    check(x);
    return score(x);
}

void Detector::learn_one(std::span<const double> x) {
    check(x);
    learn(x);
}

}  // namespace streamad
