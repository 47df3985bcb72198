#include "streamad/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include "streamad/csv.hpp"
#include "streamad/preprocess.hpp"

namespace streamad {

namespace {

enum Col {
    kTimestamp,
    kProcessId,
    kThreadId,
    kParentProcessId,
    kUserId,
    kMountNamespace,
    kProcessName,
    kHostName,
    kEventId,
    kEventName,
    kArgsNum,
    kReturnValue,
    kSus,
    kEvil,
    kColumnCount,
};

constexpr std::array<const char*, kColumnCount> kColumnNames = {
    "timestamp", "processId", "threadId",  "parentProcessId", "userId",
    "mountNamespace", "processName", "hostName", "eventId", "eventName",
    "argsNum",   "returnValue", "sus",     "evil",
};

bool parse_int(const std::string& s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec == std::errc{} && res.ptr == last) return true;
    // Some exports write integral columns as "1.0".
    double d = 0.0;
    res = std::from_chars(first, last, d);
    if (res.ec != std::errc{} || res.ptr != last || d != static_cast<double>(static_cast<std::int64_t>(d))) {
        return false;
    }
    out = static_cast<std::int64_t>(d);
    return true;
}

bool parse_real(const std::string& s, double& out) {
    const char* last = s.data() + s.size();
    auto res = std::from_chars(s.data(), last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace

DatasetSplit load_split(std::istream& in, std::string name, std::string source) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || (fields.size() == 1 && fields[0].empty())) throw EmptyFile(source);

    if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
    std::array<std::size_t, kColumnCount> index{};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
        auto it = std::find(fields.begin(), fields.end(), kColumnNames[c]);
        if (it == fields.end()) throw MissingColumn(kColumnNames[c], source);
        index[c] = static_cast<std::size_t>(it - fields.begin());
    }
    const std::size_t width = fields.size();

    DatasetSplit split{std::move(name), {}, std::move(source)};
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != width) {
            throw MalformedRow(row,
                               "expected " + std::to_string(width) + " fields, got " +
                                   std::to_string(fields.size()),
                               split.source_path);
        }
        Event e;
        auto int_field = [&](Col c, std::int64_t& out) {
            if (!parse_int(fields[index[c]], out)) {
                throw MalformedRow(row, std::string("bad integer in ") + kColumnNames[c],
                                   split.source_path);
            }
        };
        if (!parse_real(fields[index[kTimestamp]], e.timestamp)) {
            throw MalformedRow(row, "bad timestamp", split.source_path);
        }
        int_field(kProcessId, e.processId);
        int_field(kThreadId, e.threadId);
        int_field(kParentProcessId, e.parentProcessId);
        int_field(kUserId, e.userId);
        int_field(kMountNamespace, e.mountNamespace);
        int_field(kEventId, e.eventId);
        int_field(kArgsNum, e.argsNum);
        int_field(kReturnValue, e.returnValue);
        std::int64_t label = 0;
        int_field(kSus, label);
        if (label != 0 && label != 1) throw MalformedRow(row, "sus not in {0,1}", split.source_path);
        e.sus = static_cast<int>(label);
        int_field(kEvil, label);
        if (label != 0 && label != 1) throw MalformedRow(row, "evil not in {0,1}", split.source_path);
        e.evil = static_cast<int>(label);
        e.processName = std::move(fields[index[kProcessName]]);
        e.hostName = std::move(fields[index[kHostName]]);
        e.eventName = std::move(fields[index[kEventName]]);
        split.events.push_back(std::move(e));
    }
    return split;
}

DatasetSplit load_split(const std::filesystem::path& path, std::string name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    if (name.empty()) name = path.stem().string();
    return load_split(in, std::move(name), path.string());
}

DatasetSplit sort_split(DatasetSplit split) {
    std::stable_sort(split.events.begin(), split.events.end(), [](const Event& a, const Event& b) {
        if (a.hostName != b.hostName) return a.hostName < b.hostName;
        return a.timestamp < b.timestamp;
    });
    return split;
}

const std::string* ProcessNameTable::find(const std::string& host, std::int64_t pid) const {
    auto h = hosts_.find(host);
    if (h == hosts_.end()) return nullptr;
    auto p = h->second.find(pid);
    return p == h->second.end() ? nullptr : &p->second;
}

void ProcessNameTable::record(const std::string& host, std::int64_t pid, const std::string& name) {
    hosts_[host][pid] = name;
}

std::size_t ProcessNameTable::size() const noexcept {
    std::size_t n = 0;
    for (const auto& [host, pids] : hosts_) n += pids.size();
    return n;
}

DatasetSplit enrich_parent_names(DatasetSplit split, ProcessNameTable& table) {
    for (auto& e : split.events) {
        const std::string* parent = table.find(e.hostName, e.parentProcessId);
        e.parentProcessName = parent ? *parent : std::string(kUnknownParent);
        table.record(e.hostName, e.processId, e.processName);
    }
    return split;
}

DatasetSplit derive_split_flags(DatasetSplit split) {
    for (auto& e : split.events) e = derive_flags(std::move(e));
    return split;
}

}  // namespace streamad
