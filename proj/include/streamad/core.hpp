#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamad {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    InvalidParameter(std::string field, const std::string& reason)
        : Error("invalid parameter '" + field + "': " + reason), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

class NonFiniteInput : public Error {
public:
    explicit NonFiniteInput(std::size_t index)
        : Error("non-finite input value at feature " + std::to_string(index)) {}
};

class DegenerateLabels : public Error {
public:
    DegenerateLabels() : Error("degenerate labels: both classes must be present") {}
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// One BETH process-telemetry record. `args` and `stackAddresses` are read
/// past by the loader and never stored.
struct Event {
    double timestamp = 0.0;
    std::int64_t processId = 0;
    std::int64_t threadId = 0;
    std::int64_t parentProcessId = 0;
    std::int64_t userId = 0;
    std::int64_t mountNamespace = 0;
    std::string processName;
    std::string hostName;
    std::int64_t eventId = 0;
    std::string eventName;
    std::int64_t argsNum = 0;
    std::int64_t returnValue = 0;
    int sus = 0;
    int evil = 0;

    std::optional<std::string> parentProcessName;

    int processId_nonOS = 0;
    int parentProcessId_nonOS = 0;
    int userId_nonOS = 0;
    int returnValue_error = 0;
};

using FeatureVector = std::vector<double>;

enum class DetectorKind {
    HSTree,
    IForestASD,
    ILOF,
    KitNet,
    LODA,
    OCSVM,
    RRCF,
    RSHash,
    Storm,
    XStream,
};

inline constexpr DetectorKind kAllDetectorKinds[] = {
    DetectorKind::HSTree, DetectorKind::IForestASD, DetectorKind::ILOF, DetectorKind::KitNet,
    DetectorKind::LODA,   DetectorKind::OCSVM,      DetectorKind::RRCF, DetectorKind::RSHash,
    DetectorKind::Storm,  DetectorKind::XStream,
};

std::string_view to_string(DetectorKind kind) noexcept;

/// Case-insensitive; accepts "rs-hash"/"rshash", "iforestasd", "xstream", etc.
std::optional<DetectorKind> parse_detector_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Prequential detector contract
// ---------------------------------------------------------------------------

/// Every detector scores a vector against its current state and then absorbs
/// it. Higher scores mean more anomalous under the detector's own convention;
/// no detector flips its output to fix miscalibration.
///
/// A state is single-writer. Copies made with clone() are independent.
class Detector {
public:
    virtual ~Detector() = default;

    /// Score x against the state, then learn x. The returned value never
    /// depends on x having been learned.
    double process_one(std::span<const double> x);

    /// Score x without learning it. Fixes the input dimension if unset.
    double score_one(std::span<const double> x);

    /// Learn x without scoring it.
    void learn_one(std::span<const double> x);

    virtual DetectorKind kind() const noexcept = 0;
    virtual std::unique_ptr<Detector> clone() const = 0;

    /// Number of stream points currently retained, for windowed detectors.
    virtual std::size_t stored_points() const noexcept { return 0; }
    /// Upper bound on stored_points(); 0 when the detector keeps no points.
    virtual std::size_t point_capacity() const noexcept { return 0; }

    /// 0 until the first vector is seen.
    std::size_t dimension() const noexcept { return dim_; }

protected:
    Detector() = default;
    Detector(const Detector&) = default;
    Detector& operator=(const Detector&) = default;

    virtual void init(std::size_t dim) { (void)dim; }
    virtual double score(std::span<const double> x) const = 0;
    virtual void learn(std::span<const double> x) = 0;

private:
    void check(std::span<const double> x);

    std::size_t dim_ = 0;
};

}  // namespace streamad
