#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vcdg/field.hpp"

namespace vcdg {

// RFC 4180 CSV with '.' decimals; floats printed as %.9e.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  static std::string num(double v);

private:
  FILE* f_ = nullptr;
};

// Field checkpoint: (element_index, coeff_0..coeff_p) rows plus a JSON
// sidecar carrying the mesh hash, degree and time stamp.
void save_field(const BrokenField& f, const std::filesystem::path& csv_path,
                double time_stamp);

std::string json_escape(const std::string& s);

} // namespace vcdg
