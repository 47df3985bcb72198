#include "streamad/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <ostream>

#include "streamad/csv.hpp"

namespace streamad {

namespace {

constexpr std::array<const char*, 9> kHeader = {
    "model",         "sorted",       "enriched",     "time_mean_s", "time_std_s",
    "auc_evil_mean", "auc_evil_std", "auc_sus_mean", "auc_sus_std",
};

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::array<std::string, 9> cells(const ReportRow& r, const char* spec) {
    return {std::string(to_string(r.cell.kind)),
            r.cell.sorted ? "true" : "false",
            r.cell.enriched ? "true" : "false",
            fmt(r.time.mean, spec),
            fmt(r.time.std, spec),
            fmt(r.auc_evil.mean, spec),
            fmt(r.auc_evil.std, spec),
            fmt(r.auc_sus.mean, spec),
            fmt(r.auc_sus.std, spec)};
}

bool parse_bool(const std::string& s, std::size_t row) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw Error("report row " + std::to_string(row) + ": bad boolean '" + s + "'");
}

double parse_double(const std::string& s, std::size_t row) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error("report row " + std::to_string(row) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_report_csv(std::ostream& out, const Report& report) {
    for (std::size_t i = 0; i < kHeader.size(); ++i) out << (i ? "," : "") << kHeader[i];
    out << '\n';
    for (const auto& row : report.rows) {
        const auto c = cells(row, "%.17g");
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv::escape(c[i]);
        out << '\n';
    }
}

Report read_report_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> f;
    if (!reader.next(f) || f.size() != kHeader.size() ||
        !std::equal(f.begin(), f.end(), kHeader.begin())) {
        throw Error("not a report CSV (unexpected header)");
    }
    Report report;
    std::size_t row = 0;
    while (reader.next(f)) {
        ++row;
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != kHeader.size()) throw Error("report row " + std::to_string(row) + ": wrong field count");
        const auto kind = parse_detector_kind(f[0]);
        if (!kind) throw Error("report row " + std::to_string(row) + ": unknown model '" + f[0] + "'");
        ReportRow r;
        r.cell = {*kind, parse_bool(f[1], row), parse_bool(f[2], row)};
        r.time = {parse_double(f[3], row), parse_double(f[4], row)};
        r.auc_evil = {parse_double(f[5], row), parse_double(f[6], row)};
        r.auc_sus = {parse_double(f[7], row), parse_double(f[8], row)};
        report.rows.push_back(r);
    }
    return report;
}

void write_report_markdown(std::ostream& out, const Report& report) {
    std::vector<std::array<std::string, 9>> table;
    table.push_back({});
    for (std::size_t i = 0; i < kHeader.size(); ++i) table[0][i] = kHeader[i];
    for (const auto& row : report.rows) table.push_back(cells(row, "%.3f"));

    std::array<std::size_t, 9> width{};
    for (const auto& r : table)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());

    auto emit = [&](const std::array<std::string, 9>& r) {
        out << '|';
        for (std::size_t i = 0; i < r.size(); ++i) {
            // Text columns left-aligned, numbers right-aligned.
            const auto pad = std::string(width[i] - r[i].size(), ' ');
            out << ' ' << (i < 3 ? r[i] + pad : pad + r[i]) << " |";
        }
        out << '\n';
    };
    emit(table[0]);
    out << '|';
    for (std::size_t i = 0; i < width.size(); ++i) {
        out << (i < 3 ? " :" : " ") << std::string(width[i] - 1, '-') << (i < 3 ? " |" : ": |");
    }
    out << '\n';
    for (std::size_t r = 1; r < table.size(); ++r) emit(table[r]);

    if (!report.failures.empty()) {
        out << "\nFailed runs:\n\n";
        for (const auto& f : report.failures) {
            out << "- " << to_string(f.cell.kind) << " sorted=" << (f.cell.sorted ? "true" : "false")
                << " enriched=" << (f.cell.enriched ? "true" : "false") << " seed=" << f.seed << ": "
                << f.message << '\n';
        }
    }
}

}  // namespace streamad
