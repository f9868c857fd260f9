#include "qrabi/table.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace qrabi::table {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::string>& metadata, bool append)
    : path_(path), n_cols_(header.size()) {
    out_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path + " for writing");
    if (!append) {
        for (const auto& m : metadata) out_ << "# " << m << "\n";
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
    }
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw IoError("row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::write_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    write_row(cells);
}

void CsvWriter::flush() { out_.flush(); }

namespace {
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}
}  // namespace

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Table t;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t start = line.find_first_not_of("# ");
            t.metadata.push_back(start == std::string::npos ? "" : line.substr(start));
            continue;
        }
        if (!saw_header) {
            t.header = split_csv(line);
            saw_header = true;
        } else {
            t.rows.push_back(split_csv(line));
        }
    }
    return t;
}

double Table::as_double(std::size_t row, std::size_t col) const {
    return std::stod(rows.at(row).at(col));
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::size_t count_data_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    std::size_t n = 0;
    bool saw_header = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        ++n;
    }
    return n;
}

}  // namespace qrabi::table
