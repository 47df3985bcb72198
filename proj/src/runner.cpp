#include "streamad/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "streamad/detectors/factory.hpp"
#include "streamad/roc_auc.hpp"

namespace streamad {

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw InvalidParameter("seeds", "must not be empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
        throw InvalidParameter("seeds", "must be distinct");
    }
    params.validate(kind);
}

RunResult run_one(const ExperimentConfig& cfg, const PreparedData& data, std::uint64_t seed,
                  const ProgressFn& progress, std::size_t progress_every) {
    using clock = std::chrono::steady_clock;

    auto detector = make_detector(cfg.kind, cfg.params, seed);
    FeaturePipeline pipeline(data.columns, cfg.scaler.value_or(scaler_for(cfg.kind)));

    RunResult result;
    result.kind = cfg.kind;
    result.sorted = cfg.sorted;
    result.enriched = cfg.enriched;
    result.seed = seed;
    result.scores.resize(data.n_rows);

    std::vector<double> x(pipeline.dimension());
    clock::duration elapsed{};
    const bool per_event = cfg.timing == TimingMode::PerEvent;
    const auto run_start = clock::now();
    for (std::size_t r = 0; r < data.n_rows; ++r) {
        if (per_event) {
            const auto t0 = clock::now();
            pipeline.transform(data, r, x);
            result.scores[r] = detector->process_one(x);
            elapsed += clock::now() - t0;
        } else {
            pipeline.transform(data, r, x);
            result.scores[r] = detector->process_one(x);
        }
        if (progress && progress_every > 0 && (r + 1) % progress_every == 0) {
            progress(r + 1, data.n_rows);
        }
    }
    if (!per_event) elapsed = clock::now() - run_start;
    result.total_time_seconds = std::chrono::duration<double>(elapsed).count();

    const std::span<const double> test_scores(result.scores.data() + data.n_train,
                                              data.n_rows - data.n_train);
    const std::span<const std::uint8_t> evil(data.evil.data() + data.n_train, test_scores.size());
    const std::span<const std::uint8_t> sus(data.sus.data() + data.n_train, test_scores.size());
    result.roc_auc_evil = roc_auc(test_scores, evil);
    result.roc_auc_sus = roc_auc(test_scores, sus);
    return result;
}

std::string score_dump_name(const RunResult& result) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "scores_%s_sorted%d_enriched%d_seed%llu.csv",
                  std::string(to_string(result.kind)).c_str(), result.sorted ? 1 : 0,
                  result.enriched ? 1 : 0, static_cast<unsigned long long>(result.seed));
    return buf;
}

void write_score_dump(const std::filesystem::path& path, const RunResult& result,
                      const PreparedData& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "index,score,evil,sus\n";
    char buf[64];
    for (std::size_t i = 0; i < result.scores.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", result.scores[i]);
        out << i << ',' << buf << ',' << int(data.evil[i]) << ',' << int(data.sus[i]) << '\n';
    }
}

// ---------------------------------------------------------------------------

Summary summarize(std::span<const double> values) {
    Summary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

namespace {

bool same_cell(const GridCell& a, const GridCell& b) {
    return a.kind == b.kind && a.sorted == b.sorted && a.enriched == b.enriched;
}

}  // namespace

Report aggregate(const std::vector<RunResult>& runs, std::vector<CellFailure> failures) {
    Report report;
    report.failures = std::move(failures);
    std::vector<GridCell> cells;
    for (const auto& r : runs) {
        const GridCell c{r.kind, r.sorted, r.enriched};
        bool seen = false;
        for (const auto& e : cells) seen = seen || same_cell(e, c);
        if (!seen) cells.push_back(c);
    }
    for (const auto& c : cells) {
        std::vector<double> time, evil, sus;
        for (const auto& r : runs) {
            if (!same_cell(c, {r.kind, r.sorted, r.enriched})) continue;
            time.push_back(r.total_time_seconds);
            evil.push_back(r.roc_auc_evil);
            sus.push_back(r.roc_auc_sus);
        }
        report.rows.push_back({c, time.size(), summarize(time), summarize(evil), summarize(sus)});
    }
    return report;
}

std::vector<GridCell> expand_grid(const std::vector<DetectorKind>& kinds,
                                  const std::vector<bool>& sorted,
                                  const std::vector<bool>& enriched) {
    std::vector<GridCell> cells;
    for (auto k : kinds)
        for (bool s : sorted)
            for (bool e : enriched) cells.push_back({k, s, e});
    return cells;
}

Report run_grid(const std::vector<GridCell>& cells, const DataProvider& data,
                const GridOptions& options) {
    struct Task {
        std::size_t cell;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (auto s : options.seeds) tasks.push_back({c, s});

    std::vector<std::optional<RunResult>> results(tasks.size());
    std::vector<std::optional<std::string>> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex log_mutex;
    auto log = [&](const std::string& line) {
        if (!options.log) return;
        std::lock_guard lock(log_mutex);
        options.log(line);
    };

    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            const auto& cell = cells[tasks[t].cell];
            const auto seed = tasks[t].seed;
            char label[128];
            std::snprintf(label, sizeof label, "%s sorted=%d enriched=%d seed=%llu",
                          std::string(to_string(cell.kind)).c_str(), cell.sorted ? 1 : 0,
                          cell.enriched ? 1 : 0, static_cast<unsigned long long>(seed));
            try {
                ExperimentConfig cfg;
                cfg.kind = cell.kind;
                cfg.params = options.params;
                cfg.sorted = cell.sorted;
                cfg.enriched = cell.enriched;
                cfg.seeds = {seed};
                cfg.timing = options.timing;
                const auto& prepared = data(cell.sorted, cell.enriched);
                auto result = run_one(cfg, prepared, seed, [&](std::size_t n, std::size_t total) {
                    log(std::string(label) + ": " + std::to_string(n) + "/" +
                        std::to_string(total) + " events");
                });
                if (options.dump_dir) {
                    write_score_dump(*options.dump_dir / score_dump_name(result), result, prepared);
                }
                char line[256];
                std::snprintf(line, sizeof line, "%s: %.3f s (%.0f events/s), auc_evil=%.4f auc_sus=%.4f",
                              label, result.total_time_seconds,
                              result.total_time_seconds > 0
                                  ? static_cast<double>(result.scores.size()) / result.total_time_seconds
                                  : 0.0,
                              result.roc_auc_evil, result.roc_auc_sus);
                results[t] = std::move(result);
                log(line);
            } catch (const std::exception& e) {
                errors[t] = e.what();
                log(std::string(label) + ": FAILED: " + e.what());
            }
            log("[" + std::to_string(++done) + "/" + std::to_string(tasks.size()) + " runs done]");
        }
    };

    const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<RunResult> runs;
    std::vector<CellFailure> failures;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (results[t]) runs.push_back(std::move(*results[t]));
        if (errors[t]) failures.push_back({cells[tasks[t].cell], tasks[t].seed, *errors[t]});
    }
    return aggregate(runs, std::move(failures));
}

}  // namespace streamad
