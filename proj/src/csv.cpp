#include "kerr_ring/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace kerr_ring {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_int(long long x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), n_cols_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_)
        throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() { out_.flush(); }

} // namespace kerr_ring
