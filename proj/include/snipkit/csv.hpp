#pragma once

// Minimal RFC 4180 style CSV reader/writer. Quoted fields may contain
// commas, quotes and newlines; blank lines between records are skipped.

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "snipkit/errors.hpp"

namespace snipkit::csv {

class Reader {
public:
    Reader(std::istream& in, std::string file_name)
        : in_(in), file_(std::move(file_name)) {}

    // Next record, or nullopt at end of input.
    std::optional<std::vector<std::string>> next() {
        skip_blank_lines();
        int c = in_.peek();
        if (c == std::char_traits<char>::eof()) return std::nullopt;

        record_line_ = line_;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        while (true) {
            c = in_.get();
            if (c == std::char_traits<char>::eof()) {
                if (quoted) throw ParseError(file_, record_line_, "unterminated quoted field");
                fields.push_back(std::move(field));
                return fields;
            }
            char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
            } else if (ch == '"') {
                if (!field.empty())
                    throw ParseError(file_, line_, "quote inside unquoted field");
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\r') {
                // tolerate CRLF
            } else if (ch == '\n') {
                ++line_;
                fields.push_back(std::move(field));
                return fields;
            } else {
                field.push_back(ch);
            }
        }
    }

    // 1-based line number of the record most recently returned.
    std::size_t record_line() const { return record_line_; }

private:
    void skip_blank_lines() {
        while (true) {
            int c = in_.peek();
            if (c == '\n') {
                in_.get();
                ++line_;
            } else if (c == '\r') {
                in_.get();
            } else {
                return;
            }
        }
    }

    std::istream& in_;
    std::string file_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

inline std::string escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

inline void write_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace snipkit::csv
