#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

/// Cut-offs behind the four derived binary flags.
struct FlagThresholds {
    std::int64_t max_os_process_id = 2;    // pid <= this is an OS process
    std::int64_t min_user_id = 1000;       // uid >= this is a user account
};

/// Sets processId_nonOS, parentProcessId_nonOS, userId_nonOS and
/// returnValue_error from the raw fields. Pure.
Event derive_flags(Event e, const FlagThresholds& thresholds = {});

// ---------------------------------------------------------------------------

/// Stream-mode ordinal encoder: codes 0, 1, 2, ... per column in order of
/// first appearance. A code never changes once assigned.
class OrdinalEncoder {
public:
    explicit OrdinalEncoder(std::size_t n_columns = 0) : columns_(n_columns) {}

    int encode(std::size_t column, const std::string& value);
    std::size_t n_columns() const noexcept { return columns_.size(); }
    std::size_t n_categories(std::size_t column) const { return columns_.at(column).size(); }

private:
    std::vector<std::unordered_map<std::string, int>> columns_;
};

// ---------------------------------------------------------------------------

enum class ScalerMode { None, Standard, MinMax };

std::string_view to_string(ScalerMode mode) noexcept;

/// Running per-dimension scaler. scale_one() updates the statistics with x
/// first and then transforms x, so the very first vector is well defined.
/// Zero spread maps to 0.
class RunningScaler {
public:
    explicit RunningScaler(ScalerMode mode = ScalerMode::None) : mode_(mode) {}

    ScalerMode mode() const noexcept { return mode_; }

    void update(std::span<const double> x);
    void transform(std::span<const double> x, std::span<double> out) const;
    /// update() then transform(), in place.
    void scale_one(std::span<double> x);

    std::uint64_t count() const noexcept { return count_; }
    double mean(std::size_t i) const { return mean_.at(i); }
    /// Population variance (divides by n).
    double variance(std::size_t i) const;
    double min(std::size_t i) const { return min_.at(i); }
    double max(std::size_t i) const { return max_.at(i); }

private:
    ScalerMode mode_;
    std::uint64_t count_ = 0;
    std::vector<double> mean_, m2_, min_, max_;
};

// ---------------------------------------------------------------------------

/// Columns that can appear in a feature schema.
bool is_known_column(std::string_view name);
bool is_categorical_column(std::string_view name);

/// Text form of one column of an event, as written to prepared files.
std::string column_text(const Event& e, std::string_view name);

/// The default 8-column schema, plus parentProcessName when enriched.
std::vector<std::string> default_schema(bool enriched);

/// Stable FNV-1a hash of the schema column list.
std::uint64_t schema_hash(std::span<const std::string> schema);

struct PipelineConfig {
    bool enriched = false;
    bool sorted = false;
    ScalerMode scaler = ScalerMode::None;
    std::vector<std::string> schema = default_schema(false);
    FlagThresholds thresholds;
};

/// Scaler assigned to each detector: standard for OCSVM, min-max for
/// HSTree, none otherwise.
ScalerMode scaler_for(DetectorKind kind) noexcept;

/// Offline-prepared rows: numeric columns already parsed, categorical
/// columns still raw strings awaiting stream-mode encoding.
struct PreparedData {
    std::vector<std::string> columns;
    std::vector<bool> categorical;
    std::size_t n_rows = 0;
    std::size_t n_train = 0;
    std::vector<double> numeric;      // n_rows x columns.size(); categorical slots unused
    std::vector<std::string> text;    // n_rows x n_categorical
    std::vector<std::uint8_t> evil;
    std::vector<std::uint8_t> sus;

    std::size_t n_categorical() const noexcept;
    void append(const Event& e);
};

PreparedData make_prepared(std::span<const std::string> schema);

/// Stream-mode encoding plus scaling of prepared rows into feature vectors.
class FeaturePipeline {
public:
    FeaturePipeline(std::vector<std::string> schema, ScalerMode scaler);

    std::size_t dimension() const noexcept { return schema_.size(); }
    const std::vector<std::string>& schema() const noexcept { return schema_; }

    /// Row `row` of `data` into `out` (size dimension()).
    void transform(const PreparedData& data, std::size_t row, std::span<double> out);

    /// Convenience for a single event with derived flags and enrichment
    /// already applied.
    FeatureVector build(const Event& e);

    const OrdinalEncoder& encoder() const noexcept { return encoder_; }
    const RunningScaler& scaler() const noexcept { return scaler_; }

private:
    std::vector<std::string> schema_;
    std::vector<int> category_slot_;  // -1 for numeric columns
    OrdinalEncoder encoder_;
    RunningScaler scaler_;
};

}  // namespace streamad
