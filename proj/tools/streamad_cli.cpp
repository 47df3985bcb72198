// streamad: prepare BETH variants, replay them through streaming detectors,
// and tabulate ROC-AUC and timing.
//
// Exit codes: 0 success, 1 runtime failure (including any failed grid run),
// 2 usage or configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "streamad/prepared.hpp"
#include "streamad/report.hpp"
#include "streamad/runner.hpp"

namespace fs = std::filesystem;
using namespace streamad;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<bool> parse_tristate(const std::string& flag, const std::string& v) {
    if (v == "true") return {true};
    if (v == "false") return {false};
    if (v == "both") return {false, true};
    throw UsageError("--" + flag + " must be true, false or both (got '" + v + "')");
}

std::vector<DetectorKind> parse_models(const std::vector<std::string>& names) {
    std::vector<DetectorKind> kinds;
    auto add = [&](DetectorKind k) {
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    };
    for (const auto& arg : names) {
        std::stringstream ss(arg);
        for (std::string name; std::getline(ss, name, ',');) {
            if (name.empty()) continue;
            if (name == "all") {
                for (auto k : kAllDetectorKinds) add(k);
                continue;
            }
            const auto k = parse_detector_kind(name);
            if (!k) throw UsageError("unknown model '" + name + "'");
            add(*k);
        }
    }
    if (kinds.empty()) throw UsageError("no model given");
    return kinds;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw UsageError("bad seed '" + s + "'");
    }
    return v;
}

/// "0,1,2", "0-4" or a mix such as "0-2,7".
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const auto lo = parse_u64(item.substr(0, dash));
            const auto hi = parse_u64(item.substr(dash + 1));
            if (hi < lo) throw UsageError("bad seed range '" + item + "'");
            for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(parse_u64(item));
        }
    }
    if (seeds.empty()) throw UsageError("--seeds is empty");
    auto sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw UsageError("--seeds must be distinct");
    }
    return seeds;
}

TimingMode parse_timing(const std::string& v) {
    if (v == "per-event") return TimingMode::PerEvent;
    if (v == "stopwatch") return TimingMode::Stopwatch;
    throw UsageError("--timing must be per-event or stopwatch (got '" + v + "')");
}

void log_line(const std::string& line) { std::cerr << line << std::endl; }

/// Lazily loads raw splits and caches prepared variants on disk.
class VariantStore {
public:
    VariantStore(fs::path data_dir, fs::path cache_dir)
        : data_dir_(std::move(data_dir)), cache_dir_(std::move(cache_dir)) {}

    /// Ensures the variant file pair exists; returns its paths.
    PreparedPaths ensure(bool sorted, bool enriched) {
        const auto schema = default_schema(enriched);
        const auto paths = prepared_paths(cache_dir_, sorted, enriched, schema);
        if (fs::exists(paths.train) && fs::exists(paths.test)) {
            log_line("cached: " + paths.train.string());
            return paths;
        }
        if (!raw_) {
            if (data_dir_.empty()) throw UsageError("--data-dir is required to prepare data");
            log_line("loading " + data_dir_.string());
            raw_ = load_beth(data_dir_);
            log_line("loaded " + std::to_string(raw_->first.events.size()) + " train + " +
                     std::to_string(raw_->second.events.size()) + " test events");
        }
        fs::create_directories(cache_dir_);
        const auto data = prepare_variant(raw_->first, raw_->second, sorted, enriched, schema);
        write_prepared(data, paths);
        log_line("wrote " + paths.train.string() + " and " + paths.test.string());
        return paths;
    }

    void load(bool sorted, bool enriched) {
        const auto paths = ensure(sorted, enriched);
        data_[{sorted, enriched}] = read_prepared(paths);
    }

    const PreparedData& get(bool sorted, bool enriched) const { return data_.at({sorted, enriched}); }

    void drop_raw() { raw_.reset(); }

private:
    fs::path data_dir_;
    fs::path cache_dir_;
    std::optional<std::pair<DatasetSplit, DatasetSplit>> raw_;
    std::map<std::pair<bool, bool>, PreparedData> data_;
};

void write_reports(const Report& report, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    {
        std::ofstream csv(out_dir / "report.csv", std::ios::binary);
        if (!csv) throw Error("cannot write " + (out_dir / "report.csv").string());
        write_report_csv(csv, report);
    }
    std::ofstream md(out_dir / "report.md", std::ios::binary);
    if (!md) throw Error("cannot write " + (out_dir / "report.md").string());
    write_report_markdown(md, report);
    log_line("wrote " + (out_dir / "report.csv").string() + " and " +
             (out_dir / "report.md").string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming anomaly detection benchmark on BETH process telemetry"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::string data_dir, out, cache_dir, params_path, timing = "per-event";
    std::string sorted = "both", enriched = "both", seeds = "0-4";
    std::vector<std::string> models;
    std::size_t workers = 1;
    bool dump_scores = false;
    std::string report_in;

    auto data_opt = [&](CLI::App* sub) {
        sub->add_option("--data-dir", data_dir, "Directory with the BETH labelled CSVs")
            ->envname("STREAMAD_DATA_DIR");
    };
    auto cache_opt = [&](CLI::App* sub) {
        sub->add_option("--cache-dir", cache_dir,
                        "Prepared-feature cache (default: <out>/prepared)")
            ->envname("STREAMAD_CACHE_DIR");
    };
    auto run_opts = [&](CLI::App* sub) {
        sub->add_option("--model", models, "Detector name (repeatable, comma-separated, or 'all')")
            ->envname("STREAMAD_MODEL");
        sub->add_option("--seeds", seeds, "Seeds: list and/or ranges, e.g. 0-4 or 0,3,7")
            ->envname("STREAMAD_SEEDS");
        sub->add_option("--params", params_path, "Hyperparameter file (key = value)")
            ->envname("STREAMAD_PARAMS");
        sub->add_option("--workers", workers, "Runs executed in parallel")
            ->envname("STREAMAD_WORKERS")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--dump-scores", dump_scores, "Write per-run score CSVs into <out>/scores")
            ->envname("STREAMAD_DUMP_SCORES");
        sub->add_option("--timing", timing, "per-event or stopwatch")->envname("STREAMAD_TIMING");
    };

    auto* prepare = app.add_subcommand("prepare", "Write prepared train/test features for each variant");
    data_opt(prepare);
    prepare->add_option("--out", out, "Output directory")->envname("STREAMAD_OUT")->required();
    prepare->add_option("--sorted", sorted, "true|false|both")->envname("STREAMAD_SORTED");
    prepare->add_option("--enriched", enriched, "true|false|both")->envname("STREAMAD_ENRICHED");

    auto* run = app.add_subcommand("run", "Replay one model on one variant over the seeds");
    data_opt(run);
    cache_opt(run);
    run->add_option("--out", out, "Output directory for report.csv / report.md")
        ->envname("STREAMAD_OUT")
        ->required();
    run->add_option("--sorted", sorted, "true|false")->envname("STREAMAD_SORTED");
    run->add_option("--enriched", enriched, "true|false")->envname("STREAMAD_ENRICHED");
    run_opts(run);

    auto* grid = app.add_subcommand("grid", "Replay models x variants x seeds and tabulate");
    data_opt(grid);
    cache_opt(grid);
    grid->add_option("--out", out, "Output directory for report.csv / report.md")
        ->envname("STREAMAD_OUT")
        ->required();
    grid->add_option("--sorted", sorted, "true|false|both")->envname("STREAMAD_SORTED");
    grid->add_option("--enriched", enriched, "true|false|both")->envname("STREAMAD_ENRICHED");
    run_opts(grid);

    auto* report = app.add_subcommand("report", "Render a report CSV as a Markdown table");
    report->add_option("--in", report_in, "report.csv written by run/grid")->required();
    report->add_option("--out", out, "Markdown output file (default: stdout)")
        ->envname("STREAMAD_OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (report->parsed()) {
            std::ifstream in(report_in, std::ios::binary);
            if (!in) throw UsageError("cannot open " + report_in);
            const auto rep = read_report_csv(in);
            if (out.empty()) {
                write_report_markdown(std::cout, rep);
            } else {
                std::ofstream md(out, std::ios::binary);
                if (!md) throw Error("cannot write " + out);
                write_report_markdown(md, rep);
            }
            return 0;
        }

        if (prepare->parsed()) {
            if (data_dir.empty()) throw UsageError("--data-dir is required");
            VariantStore store(data_dir, out);
            for (bool s : parse_tristate("sorted", sorted))
                for (bool e : parse_tristate("enriched", enriched)) store.ensure(s, e);
            return 0;
        }

        // run / grid
        const bool single = run->parsed();
        if (single && run->count("--sorted") == 0) sorted = "false";
        if (single && run->count("--enriched") == 0) enriched = "false";
        const auto kinds = parse_models(models);
        const auto sorted_v = parse_tristate("sorted", sorted);
        const auto enriched_v = parse_tristate("enriched", enriched);
        if (single && (kinds.size() != 1 || sorted_v.size() != 1 || enriched_v.size() != 1)) {
            throw UsageError("run takes exactly one --model, --sorted and --enriched value");
        }
        GridOptions options;
        options.seeds = parse_seeds(seeds);
        options.timing = parse_timing(timing);
        options.workers = workers;
        options.log = log_line;
        if (!params_path.empty()) {
            try {
                options.params = load_params(params_path);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
        try {
            for (auto k : kinds) options.params.validate(k);
        } catch (const InvalidParameter& e) {
            throw UsageError(e.what());
        }
        if (dump_scores) {
            options.dump_dir = fs::path(out) / "scores";
            fs::create_directories(*options.dump_dir);
        }

        VariantStore store(data_dir, cache_dir.empty() ? fs::path(out) / "prepared" : fs::path(cache_dir));
        for (bool s : sorted_v)
            for (bool e : enriched_v) store.load(s, e);
        store.drop_raw();

        const auto cells = expand_grid(kinds, sorted_v, enriched_v);
        log_line("running " + std::to_string(cells.size()) + " cells x " +
                 std::to_string(options.seeds.size()) + " seeds on " + std::to_string(workers) +
                 " worker(s)");
        const auto rep = run_grid(
            cells, [&](bool s, bool e) -> const PreparedData& { return store.get(s, e); }, options);
        write_reports(rep, out);
        if (!rep.failures.empty()) {
            log_line(std::to_string(rep.failures.size()) + " run(s) failed");
            return kExitRuntime;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
