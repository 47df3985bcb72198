#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "streamad/core.hpp"
#include "streamad/params.hpp"
#include "streamad/preprocess.hpp"

namespace streamad {

enum class TimingMode {
    PerEvent,   // monotonic clock around every encode + scale + score + learn
    Stopwatch,  // one clock around the whole replay
};

struct ExperimentConfig {
    DetectorKind kind = DetectorKind::Storm;
    DetectorParams params;
    bool sorted = false;
    bool enriched = false;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    TimingMode timing = TimingMode::PerEvent;
    /// Defaults to scaler_for(kind).
    std::optional<ScalerMode> scaler;

    /// Throws InvalidParameter for empty or repeated seeds and bad params.
    void validate() const;
};

struct RunResult {
    DetectorKind kind = DetectorKind::Storm;
    bool sorted = false;
    bool enriched = false;
    std::uint64_t seed = 0;
    std::vector<double> scores;  // train then test, one per event
    double total_time_seconds = 0.0;
    double roc_auc_evil = 0.0;   // over the test split only
    double roc_auc_sus = 0.0;
};

/// Called every `progress_every` events with (events done, total events).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Prequential replay of `data` (train then test) through a fresh detector,
/// with stream-mode encoding and scaling inside the timed region.
RunResult run_one(const ExperimentConfig& cfg, const PreparedData& data, std::uint64_t seed,
                  const ProgressFn& progress = {}, std::size_t progress_every = 100000);

/// One CSV per run: index, score, evil, sus.
void write_score_dump(const std::filesystem::path& path, const RunResult& result,
                      const PreparedData& data);
std::string score_dump_name(const RunResult& result);

// ---------------------------------------------------------------------------

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // sample (n-1); 0 for a single value
};

Summary summarize(std::span<const double> values);

struct GridCell {
    DetectorKind kind = DetectorKind::Storm;
    bool sorted = false;
    bool enriched = false;
};

struct CellFailure {
    GridCell cell;
    std::uint64_t seed = 0;
    std::string message;
};

struct ReportRow {
    GridCell cell;
    std::size_t n_runs = 0;
    Summary time;
    Summary auc_evil;
    Summary auc_sus;
};

struct Report {
    std::vector<ReportRow> rows;
    std::vector<CellFailure> failures;
};

/// Aggregates successful runs into one row per distinct cell, in first-seen
/// order. Cells without a successful run produce no row.
Report aggregate(const std::vector<RunResult>& runs, std::vector<CellFailure> failures = {});

struct GridOptions {
    DetectorParams params;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    TimingMode timing = TimingMode::PerEvent;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> dump_dir;
    /// Human-readable progress lines; calls are serialised.
    std::function<void(const std::string&)> log;
};

/// Supplies the prepared data for a (sorted, enriched) variant. Must be
/// safe to call concurrently.
using DataProvider = std::function<const PreparedData&(bool sorted, bool enriched)>;

/// Runs every cell x seed on a pool of `workers` threads. A failing run is
/// recorded and does not stop the others.
Report run_grid(const std::vector<GridCell>& cells, const DataProvider& data,
                const GridOptions& options);

/// Every (kind, sorted, enriched) combination, kinds outermost.
std::vector<GridCell> expand_grid(const std::vector<DetectorKind>& kinds,
                                  const std::vector<bool>& sorted,
                                  const std::vector<bool>& enriched);

}  // namespace streamad
