#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace streamad::csv {

/// Minimal RFC 4180 reader: comma separated, double-quoted fields may
/// contain commas, newlines and "" escapes.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// 1-based physical line on which the last record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

/// Quote a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace streamad::csv
