#include "pvopt/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pvopt {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

double parse_double(const std::string& token, const std::string& file, int line,
                    const std::string& field) {
    if (token == "inf") return HUGE_VAL;
    if (token == "-inf") return -HUGE_VAL;
    const char* s = token.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ParseError(file, line, "field '" + field + "': not a number: '" + token + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& file, int line,
                const std::string& field) {
    const char* s = token.c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError(file, line, "field '" + field + "': not an integer: '" + token + "'");
    return v;
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw ParseError(file_name, 1, "missing required column '" + name + "'");
}

const std::string& CsvTable::cell(const CsvRow& row, int col) const {
    if (col < 0 || static_cast<size_t>(col) >= row.cells.size())
        throw ParseError(file_name, row.line_number,
                         "row has " + std::to_string(row.cells.size()) + " cells, expected at least " +
                             std::to_string(col + 1));
    return row.cells[static_cast<size_t>(col)];
}

CsvTable read_csv_stream(std::istream& in, const std::string& name_for_errors) {
    CsvTable t;
    t.file_name = name_for_errors;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_line(line);
        if (!have_header) {
            t.header = cells;
            have_header = true;
        } else {
            t.rows.push_back(CsvRow{lineno, std::move(cells)});
        }
    }
    if (!have_header) throw ParseError(name_for_errors, 0, "empty file, expected a header row");
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return read_csv_stream(in, path);
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += cells[i];
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace pvopt
