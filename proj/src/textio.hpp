// Copyright 2026 The qfk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal text/CSV helpers shared by the file-format code.

#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace qfk::detail {

/// Shortest decimal form that round-trips a 64-bit double.
inline std::string format_double(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

/// Strict full-field parse. Rejects leading/trailing junk; tolerates one
/// layer of surrounding ASCII spaces.
inline bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    if (s.empty()) {
        return false;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

/// RFC-4180 quoting: fields containing a comma, quote, CR or LF are wrapped
/// in quotes with inner quotes doubled.
inline std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Streaming RFC-4180 record reader: handles quoted fields with embedded
/// commas, doubled quotes and embedded newlines, and both LF and CRLF line
/// endings.
class CsvReader {
  public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads one record into `fields`. Returns false at end of input.
    /// Throws std::runtime_error on an unterminated quoted field.
    bool next_record(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == std::istream::traits_type::eof()) {
            return false;
        }
        std::string field;
        bool in_quotes = false;
        bool record_done = false;
        while (!record_done) {
            if (c == std::istream::traits_type::eof()) {
                if (in_quotes) {
                    throw std::runtime_error("unterminated quoted CSV field");
                }
                record_done = true;
                break;
            }
            const char ch = static_cast<char>(c);
            if (in_quotes) {
                if (ch == '"') {
                    const int peek = in_.peek();
                    if (peek == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field.push_back(ch);
                }
            } else if (ch == '"' && field.empty()) {
                in_quotes = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\n') {
                record_done = true;
                break;
            } else if (ch == '\r') {
                if (in_.peek() == '\n') {
                    in_.get();
                }
                record_done = true;
                break;
            } else {
                field.push_back(ch);
            }
            if (!record_done) {
                c = in_.get();
            }
        }
        fields.push_back(std::move(field));
        return true;
    }

  private:
    std::istream& in_;
};

}  // namespace qfk::detail
