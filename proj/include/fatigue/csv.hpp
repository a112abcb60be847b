#pragma once

// Minimal RFC 4180 style reading/writing used by every table the tools emit.

#include <string>
#include <string_view>
#include <vector>

namespace fatigue::csv {

// Splits one record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_line(std::string_view line);

// Splits a document into logical lines; strips a UTF-8 BOM and trailing '\r'.
std::vector<std::string_view> lines(std::string_view text);

// Drops leading and trailing spaces and tabs.
std::string_view trim(std::string_view s);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Header-indexed table. Rows shorter than the header are padded with "".
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // -1 when the column is absent.
    int column(std::string_view name) const;
};

Table parse_table(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace fatigue::csv
