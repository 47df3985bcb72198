#include "streamad/prepared.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <future>

#include "streamad/csv.hpp"

namespace streamad {

std::pair<DatasetSplit, DatasetSplit> load_beth(const std::filesystem::path& data_dir) {
    auto train = std::async(std::launch::async,
                            [&] { return load_split(data_dir / kTrainFile, "train"); });
    auto test = load_split(data_dir / kTestFile, "test");
    return {train.get(), std::move(test)};
}

PreparedData prepare_variant(const DatasetSplit& train, const DatasetSplit& test, bool sorted,
                             bool enriched, std::span<const std::string> schema) {
    DatasetSplit tr = derive_split_flags(sorted ? sort_split(train) : train);
    DatasetSplit te = derive_split_flags(test);
    if (enriched) {
        ProcessNameTable table;
        tr = enrich_parent_names(std::move(tr), table);
        te = enrich_parent_names(std::move(te), table);
    }
    PreparedData data = make_prepared(schema);
    const std::size_t total = tr.events.size() + te.events.size();
    data.numeric.reserve(total * schema.size());
    data.text.reserve(total * data.n_categorical());
    for (const auto& e : tr.events) data.append(e);
    data.n_train = data.n_rows;
    for (const auto& e : te.events) data.append(e);
    return data;
}

std::string prepared_stem(bool sorted, bool enriched, std::span<const std::string> schema) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "prepared_sorted%d_enriched%d_%016llx", sorted ? 1 : 0,
                  enriched ? 1 : 0, static_cast<unsigned long long>(schema_hash(schema)));
    return buf;
}

PreparedPaths prepared_paths(const std::filesystem::path& dir, bool sorted, bool enriched,
                             std::span<const std::string> schema) {
    const auto stem = prepared_stem(sorted, enriched, schema);
    return {dir / (stem + "_train.csv"), dir / (stem + "_test.csv")};
}

namespace {

void write_rows(const PreparedData& data, std::size_t begin, std::size_t end,
                const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& col : data.columns) out << col << ',';
    out << "evil,sus\n";
    const std::size_t d = data.columns.size();
    const std::size_t n_cat = data.n_categorical();
    char buf[64];
    for (std::size_t r = begin; r < end; ++r) {
        std::size_t slot = 0;
        for (std::size_t c = 0; c < d; ++c) {
            if (data.categorical[c]) {
                out << csv::escape(data.text[r * n_cat + slot++]);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", data.numeric[r * d + c]);
                out << buf;
            }
            out << ',';
        }
        out << int(data.evil[r]) << ',' << int(data.sus[r]) << '\n';
    }
}

void read_rows(PreparedData& data, const std::filesystem::path& path, bool first) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw EmptyFile(path.string());
    if (fields.size() < 3 || fields[fields.size() - 2] != "evil" || fields.back() != "sus") {
        throw MissingColumn("evil,sus", path.string());
    }
    fields.resize(fields.size() - 2);
    if (first) {
        data = make_prepared(fields);
    } else if (fields != data.columns) {
        throw Error("prepared train/test schemas differ: " + path.string());
    }
    const std::size_t d = data.columns.size();
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != d + 2) throw MalformedRow(row, "wrong field count", path.string());
        for (std::size_t c = 0; c < d; ++c) {
            if (data.categorical[c]) {
                data.numeric.push_back(0.0);
                data.text.push_back(std::move(fields[c]));
            } else {
                double v = 0.0;
                const auto& f = fields[c];
                auto res = std::from_chars(f.data(), f.data() + f.size(), v);
                if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
                    throw MalformedRow(row, "bad number in " + data.columns[c], path.string());
                }
                data.numeric.push_back(v);
            }
        }
        const auto& evil = fields[d];
        const auto& sus = fields[d + 1];
        if ((evil != "0" && evil != "1") || (sus != "0" && sus != "1")) {
            throw MalformedRow(row, "labels must be 0 or 1", path.string());
        }
        data.evil.push_back(evil == "1");
        data.sus.push_back(sus == "1");
        ++data.n_rows;
    }
}

}  // namespace

void write_prepared(const PreparedData& data, const PreparedPaths& paths) {
    write_rows(data, 0, data.n_train, paths.train);
    write_rows(data, data.n_train, data.n_rows, paths.test);
}

PreparedData read_prepared(const PreparedPaths& paths) {
    PreparedData data;
    read_rows(data, paths.train, true);
    data.n_train = data.n_rows;
    read_rows(data, paths.test, false);
    return data;
}

}  // namespace streamad
