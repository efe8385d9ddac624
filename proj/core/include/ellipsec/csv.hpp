#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace ellipsec {

/// RFC 4180 CSV output: comma separated, CRLF line endings, fields quoted
/// when they contain a comma, quote or newline.  Floats carry 17 significant
/// digits so values round-trip exactly.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& fields);

    const std::string& path() const { return path_; }

  private:
    void write_line(const std::vector<std::string>& fields);

    std::string path_;
    std::ofstream out_;
    size_t width_;
};

std::string csv_field(double v);
std::string csv_field(int v);
std::string csv_field(long v);
std::string csv_field(uint64_t v);
std::string csv_field(bool v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, -1 when absent.
    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace ellipsec
