#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace kerr_ring {

// Locale-independent shortest-roundtrip formatting ("%.17g") so repeated
// runs emit byte-identical files.
std::string format_double(double x);
std::string format_int(long long x);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void write_row(const std::vector<std::string>& cells);
    ~CsvWriter();

  private:
    std::ofstream out_;
    std::size_t n_cols_;
};

} // namespace kerr_ring
