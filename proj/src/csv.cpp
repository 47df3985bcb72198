#include "streamad/csv.hpp"

#include <istream>

namespace streamad::csv {

bool Reader::next(std::vector<std::string>& fields) {
    fields.clear();
    std::streambuf* buf = in_.rdbuf();
    int c = buf->sgetc();
    if (c == std::char_traits<char>::eof()) return false;

    record_line_ = line_;
    std::string field;
    bool quoted = false;
    while (true) {
        c = buf->sbumpc();
        if (c == std::char_traits<char>::eof()) {
            fields.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (buf->sgetc() == '"') {
                    buf->sbumpc();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            quoted = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            break;
        case '\n':
            ++line_;
            fields.push_back(std::move(field));
            return true;
        default:
            field.push_back(ch);
        }
    }
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace streamad::csv
