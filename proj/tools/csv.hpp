#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Shortest round-trip decimal form, locale-independent, so identical inputs
// always serialize to identical bytes.
inline std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Plain comma-separated tables with a mandatory header row. No quoting: the
// files this tool reads and writes never contain commas inside fields.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool has_column(const std::string& name) const {
        for (const auto& column : header) {
            if (column == name) return true;
        }
        return false;
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) return k;
        }
        throw std::runtime_error("column '" + name + "' not found");
    }

    std::vector<double> numeric_column(const std::string& name) const {
        const std::size_t index = column_index(name);
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& row : rows) {
            if (index >= row.size()) {
                throw std::runtime_error("short row while reading column '" +
                                         name + "'");
            }
            const std::string& cell = row[index];
            double value = 0;
            const auto result = std::from_chars(
                cell.data(), cell.data() + cell.size(), value);
            if (result.ec != std::errc{} ||
                result.ptr != cell.data() + cell.size()) {
                throw std::runtime_error("cell '" + cell + "' in column '" +
                                         name + "' is not numeric");
            }
            values.push_back(value);
        }
        return values;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    CsvTable table;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            table.header = split_fields(line);
            saw_header = true;
        } else {
            table.rows.push_back(split_fields(line));
        }
    }
    if (!saw_header) {
        throw std::runtime_error("'" + path + "' has no header row");
    }
    return table;
}

}  // namespace cli
