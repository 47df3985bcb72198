#include "streamad/detectors/ocsvm.hpp"

#include <cmath>

namespace streamad {

namespace {

double dot(const std::vector<double>& w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

}  // namespace

double OneClassSVM::score(std::span<const double> x) const { return rho_ - dot(w_, x); }

void OneClassSVM::learn(std::span<const double> x) {
    ++t_;
    const double eta =
        params_.learning_rate / std::pow(static_cast<double>(t_), params_.power_t);
    const bool violated = rho_ - dot(w_, x) > 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        const double grad = params_.nu * w_[i] - (violated ? x[i] : 0.0);
        w_[i] -= eta * grad;
    }
    rho_ -= eta * ((violated ? 1.0 : 0.0) - params_.nu);
}

}  // namespace streamad
