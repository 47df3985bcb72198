#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>

#include "streamad/ingest.hpp"
#include "streamad/preprocess.hpp"

namespace streamad {

inline constexpr const char* kTrainFile = "labelled_training_data.csv";
inline constexpr const char* kTestFile = "labelled_testing_data.csv";

/// Loads the train and test splits from a BETH directory, concurrently.
std::pair<DatasetSplit, DatasetSplit> load_beth(const std::filesystem::path& data_dir);

/// Offline preparation of one (sorted, enriched) variant: optional
/// (host, timestamp) sort of the training split, derived flags, parent-name
/// enrichment over train then test, projection onto `schema`.
PreparedData prepare_variant(const DatasetSplit& train, const DatasetSplit& test, bool sorted,
                             bool enriched, std::span<const std::string> schema);

/// Cache file stem keyed by variant and schema hash.
std::string prepared_stem(bool sorted, bool enriched, std::span<const std::string> schema);

struct PreparedPaths {
    std::filesystem::path train;
    std::filesystem::path test;
};

PreparedPaths prepared_paths(const std::filesystem::path& dir, bool sorted, bool enriched,
                             std::span<const std::string> schema);

/// Two CSVs (train, test): the schema columns followed by evil and sus.
void write_prepared(const PreparedData& data, const PreparedPaths& paths);
PreparedData read_prepared(const PreparedPaths& paths);

}  // namespace streamad
