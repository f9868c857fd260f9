#ifndef QRABI_TABLE_HPP
#define QRABI_TABLE_HPP

#include <fstream>
#include <string>
#include <vector>

#include "qrabi/params.hpp"

namespace qrabi::table {

struct IoError : Error {
    using Error::Error;
};

// Deterministic float serialization: 17 significant digits round-trips every
// double.
std::string format_double(double v);

// FNV-1a 64-bit hex digest (stable across platforms, unlike std::hash).
std::string fnv1a_hex(const std::string& s);

// CSV with '#'-prefixed metadata lines, then a header row, then data rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::string>& metadata, bool append = false);

    void write_row(const std::vector<std::string>& cells);
    void write_row(const std::vector<double>& values);
    void flush();
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t n_cols_;
};

struct Table {
    std::vector<std::string> metadata;  // '#' lines, prefix stripped
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    double as_double(std::size_t row, std::size_t col) const;
    int column(const std::string& name) const;  // -1 when absent
};

Table read_csv(const std::string& path);

// Number of data rows in an existing file, 0 when the file is absent
// (resume support).
std::size_t count_data_rows(const std::string& path);

}  // namespace qrabi::table

#endif
