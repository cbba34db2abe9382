#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "qclab/errors.hpp"

namespace qclab {

/// Shortest round-trip decimal form of a double: repeated runs produce
/// byte-identical files, and parsing the field recovers the exact value.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw numerical_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

/// Column-ordered CSV writer: header row mandatory, comma separated, no
/// locale dependence.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary), n_cols_(columns.size()) {
        if (!out_) throw config_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        if (values.size() != n_cols_)
            throw config_error("CsvWriter: row width does not match header");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

    void raw_row(const std::vector<std::string>& fields) {
        if (fields.size() != n_cols_)
            throw config_error("CsvWriter: row width does not match header");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t n_cols_;
};

} // namespace qclab
