#pragma once

#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"

namespace streamad {

/// Linear one-class SVM trained by SGD on
///   (nu/2)|w|^2 - nu*rho + max(0, rho - w.x)
/// with learning rate eta_t = learning_rate / t^power_t.
/// Score is rho - w.x: positive outside the learned half-space.
class OneClassSVM final : public Detector {
public:
    explicit OneClassSVM(const OCSVMParams& params) : params_(params) {}

    DetectorKind kind() const noexcept override { return DetectorKind::OCSVM; }
    std::unique_ptr<Detector> clone() const override {
        return std::make_unique<OneClassSVM>(*this);
    }

    const std::vector<double>& weights() const noexcept { return w_; }
    double offset() const noexcept { return rho_; }

protected:
    void init(std::size_t dim) override { w_.assign(dim, 0.0); }
    double score(std::span<const double> x) const override;
    void learn(std::span<const double> x) override;

private:
    OCSVMParams params_;
    std::vector<double> w_;
    double rho_ = 0.0;
    std::uint64_t t_ = 0;
};

}  // namespace streamad
