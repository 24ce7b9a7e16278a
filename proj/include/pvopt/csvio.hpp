#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvopt {

// Parse error carrying enough context to point at the offending cell.
struct ParseError : std::runtime_error {
    ParseError(const std::string& file, int line, const std::string& what_happened)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what_happened),
          file_name(file), line_number(line) {}
    std::string file_name;
    int line_number = 0;
};

// Shortest decimal representation that parses back to the same double.
// Deterministic, so serialized files are byte-stable across runs.
std::string format_double(double v);

double parse_double(const std::string& token, const std::string& file, int line,
                    const std::string& field);
long parse_long(const std::string& token, const std::string& file, int line,
                const std::string& field);

// Minimal CSV: comma separated, '#' starts a comment line, no quoting
// (none of the shipped schemas need embedded commas).
struct CsvRow {
    int line_number = 0;
    std::vector<std::string> cells;
};

struct CsvTable {
    std::string file_name;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    // Column lookup by header name; throws ParseError naming the column.
    int column(const std::string& name) const;
    const std::string& cell(const CsvRow& row, int col) const;
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv_stream(std::istream& in, const std::string& name_for_errors);

std::string join_csv(const std::vector<std::string>& cells);

// FNV-1a, used to fingerprint builtin datasets.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex16(std::uint64_t v);

}  // namespace pvopt
