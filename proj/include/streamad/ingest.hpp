#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& column, const std::string& source = {})
        : Error("missing column '" + column + "'" + (source.empty() ? "" : " in " + source)) {}
};

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t row, const std::string& reason, const std::string& source = {})
        : Error("malformed row " + std::to_string(row) + (source.empty() ? "" : " of " + source) +
                ": " + reason),
          row_(row) {}
    /// 1-based data row index (header excluded).
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class EmptyFile : public Error {
public:
    explicit EmptyFile(const std::string& source) : Error("empty file: " + source) {}
};

struct DatasetSplit {
    std::string name;
    std::vector<Event> events;
    std::string source_path;
};

/// Columns matched by header name; order in the file does not matter.
/// `args` and `stackAddresses` may be present and are discarded.
DatasetSplit load_split(const std::filesystem::path& path, std::string name = {});
DatasetSplit load_split(std::istream& in, std::string name, std::string source = "<stream>");

/// Stable sort by (hostName, timestamp).
DatasetSplit sort_split(DatasetSplit split);

/// (hostName, processId) -> most recent processName seen so far.
class ProcessNameTable {
public:
    const std::string* find(const std::string& host, std::int64_t pid) const;
    void record(const std::string& host, std::int64_t pid, const std::string& name);
    std::size_t size() const noexcept;

private:
    std::unordered_map<std::string, std::unordered_map<std::int64_t, std::string>> hosts_;
};

inline constexpr const char* kUnknownParent = "unknown";

/// Single streaming pass in event order: attach the parent's name if the
/// parent was already seen on the same host (else "unknown"), then record
/// the event's own process name.
DatasetSplit enrich_parent_names(DatasetSplit split, ProcessNameTable& table);

/// Applies derive_flags to every event.
DatasetSplit derive_split_flags(DatasetSplit split);

}  // namespace streamad
