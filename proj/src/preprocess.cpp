#include "streamad/preprocess.hpp"

#include <cstdio>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace streamad {

Event derive_flags(Event e, const FlagThresholds& t) {
    e.processId_nonOS = e.processId > t.max_os_process_id ? 1 : 0;
    e.parentProcessId_nonOS = e.parentProcessId > t.max_os_process_id ? 1 : 0;
    e.userId_nonOS = e.userId >= t.min_user_id ? 1 : 0;
    e.returnValue_error = e.returnValue < 0 ? 1 : 0;
    return e;
}

int OrdinalEncoder::encode(std::size_t column, const std::string& value) {
    auto& codes = columns_.at(column);
    const auto [it, inserted] = codes.try_emplace(value, static_cast<int>(codes.size()));
    return it->second;
}

std::string_view to_string(ScalerMode mode) noexcept {
    switch (mode) {
    case ScalerMode::None: return "none";
    case ScalerMode::Standard: return "standard";
    case ScalerMode::MinMax: return "minmax";
    }
    return "?";
}

void RunningScaler::update(std::span<const double> x) {
    if (mode_ == ScalerMode::None) return;
    if (count_ == 0) {
        mean_.assign(x.size(), 0.0);
        m2_.assign(x.size(), 0.0);
        min_.assign(x.begin(), x.end());
        max_.assign(x.begin(), x.end());
    }
    ++count_;
    const double n = static_cast<double>(count_);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x[i] - mean_[i];
        mean_[i] += delta / n;
        m2_[i] += delta * (x[i] - mean_[i]);
        min_[i] = std::min(min_[i], x[i]);
        max_[i] = std::max(max_[i], x[i]);
    }
}

double RunningScaler::variance(std::size_t i) const {
    if (count_ == 0) return 0.0;
    return m2_.at(i) / static_cast<double>(count_);
}

void RunningScaler::transform(std::span<const double> x, std::span<double> out) const {
    switch (mode_) {
    case ScalerMode::None:
        std::copy(x.begin(), x.end(), out.begin());
        return;
    case ScalerMode::Standard:
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double sd = count_ ? std::sqrt(m2_[i] / static_cast<double>(count_)) : 0.0;
            out[i] = sd > 0.0 ? (x[i] - mean_[i]) / sd : 0.0;
        }
        return;
    case ScalerMode::MinMax:
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double range = count_ ? max_[i] - min_[i] : 0.0;
            out[i] = range > 0.0 ? (x[i] - min_[i]) / range : 0.0;
        }
        return;
    }
}

void RunningScaler::scale_one(std::span<double> x) {
    update(x);
    transform(x, x);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 13> kNumericColumns = {
    "processId_nonOS", "parentProcessId_nonOS", "userId_nonOS", "returnValue_error",
    "eventId",         "argsNum",               "processId",    "threadId",
    "parentProcessId", "userId",                "mountNamespace", "returnValue",
    "timestamp",
};

constexpr std::array<std::string_view, 4> kCategoricalColumns = {
    "processName", "eventName", "parentProcessName", "hostName"};

double column_number(const Event& e, std::string_view name) {
    if (name == "processId_nonOS") return e.processId_nonOS;
    if (name == "parentProcessId_nonOS") return e.parentProcessId_nonOS;
    if (name == "userId_nonOS") return e.userId_nonOS;
    if (name == "returnValue_error") return e.returnValue_error;
    if (name == "eventId") return static_cast<double>(e.eventId);
    if (name == "argsNum") return static_cast<double>(e.argsNum);
    if (name == "processId") return static_cast<double>(e.processId);
    if (name == "threadId") return static_cast<double>(e.threadId);
    if (name == "parentProcessId") return static_cast<double>(e.parentProcessId);
    if (name == "userId") return static_cast<double>(e.userId);
    if (name == "mountNamespace") return static_cast<double>(e.mountNamespace);
    if (name == "returnValue") return static_cast<double>(e.returnValue);
    if (name == "timestamp") return e.timestamp;
    throw Error("not a numeric column: " + std::string(name));
}

const std::string& column_string(const Event& e, std::string_view name) {
    static const std::string unknown = "unknown";
    if (name == "processName") return e.processName;
    if (name == "eventName") return e.eventName;
    if (name == "hostName") return e.hostName;
    if (name == "parentProcessName") return e.parentProcessName ? *e.parentProcessName : unknown;
    throw Error("not a categorical column: " + std::string(name));
}

}  // namespace

bool is_known_column(std::string_view name) {
    return std::find(kNumericColumns.begin(), kNumericColumns.end(), name) !=
               kNumericColumns.end() ||
           is_categorical_column(name);
}

bool is_categorical_column(std::string_view name) {
    return std::find(kCategoricalColumns.begin(), kCategoricalColumns.end(), name) !=
           kCategoricalColumns.end();
}

std::string column_text(const Event& e, std::string_view name) {
    if (is_categorical_column(name)) return column_string(e, name);
    if (name == "timestamp") {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", e.timestamp);
        return buf;
    }
    return std::to_string(static_cast<long long>(column_number(e, name)));
}

std::vector<std::string> default_schema(bool enriched) {
    std::vector<std::string> schema = {
        "processId_nonOS", "parentProcessId_nonOS", "userId_nonOS", "returnValue_error",
        "eventId",         "argsNum",               "processName",  "eventName",
    };
    if (enriched) schema.emplace_back("parentProcessName");
    return schema;
}

std::uint64_t schema_hash(std::span<const std::string> schema) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& col : schema) {
        for (unsigned char c : col) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= static_cast<unsigned char>(',');
        h *= 0x100000001b3ULL;
    }
    return h;
}

ScalerMode scaler_for(DetectorKind kind) noexcept {
    switch (kind) {
    case DetectorKind::OCSVM: return ScalerMode::Standard;
    case DetectorKind::HSTree: return ScalerMode::MinMax;
    default: return ScalerMode::None;
    }
}

// ---------------------------------------------------------------------------

std::size_t PreparedData::n_categorical() const noexcept {
    return static_cast<std::size_t>(std::count(categorical.begin(), categorical.end(), true));
}

PreparedData make_prepared(std::span<const std::string> schema) {
    PreparedData data;
    for (const auto& col : schema) {
        if (!is_known_column(col)) throw InvalidParameter("schema", "unknown column " + col);
        data.columns.push_back(col);
        data.categorical.push_back(is_categorical_column(col));
    }
    return data;
}

void PreparedData::append(const Event& e) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (categorical[c]) {
            numeric.push_back(0.0);
            text.push_back(column_string(e, columns[c]));
        } else {
            numeric.push_back(column_number(e, columns[c]));
        }
    }
    evil.push_back(static_cast<std::uint8_t>(e.evil));
    sus.push_back(static_cast<std::uint8_t>(e.sus));
    ++n_rows;
}

// ---------------------------------------------------------------------------

FeaturePipeline::FeaturePipeline(std::vector<std::string> schema, ScalerMode scaler)
    : schema_(std::move(schema)), scaler_(scaler) {
    int slot = 0;
    for (const auto& col : schema_) {
        if (!is_known_column(col)) throw InvalidParameter("schema", "unknown column " + col);
        category_slot_.push_back(is_categorical_column(col) ? slot++ : -1);
    }
    encoder_ = OrdinalEncoder(static_cast<std::size_t>(slot));
}

void FeaturePipeline::transform(const PreparedData& data, std::size_t row,
                                std::span<double> out) {
    const std::size_t d = schema_.size();
    const std::size_t n_cat = encoder_.n_columns();
    const double* nums = data.numeric.data() + row * d;
    const std::string* strs = data.text.data() + row * n_cat;
    for (std::size_t c = 0; c < d; ++c) {
        const int slot = category_slot_[c];
        out[c] = slot < 0 ? nums[c]
                          : static_cast<double>(encoder_.encode(static_cast<std::size_t>(slot),
                                                                strs[slot]));
    }
    scaler_.scale_one(out);
}

FeatureVector FeaturePipeline::build(const Event& e) {
    PreparedData one = make_prepared(schema_);
    one.append(e);
    FeatureVector out(schema_.size());
    transform(one, 0, out);
    return out;
}

}  // namespace streamad
