#include "vcdg/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace vcdg {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header) {
  std::filesystem::create_directories(path.parent_path());
  f_ = std::fopen(path.string().c_str(), "wb");
  if (!f_) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    std::fprintf(f_, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\r\n");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9e", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%.9e%s", values[i], i + 1 < values.size() ? "," : "\r\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    std::fprintf(f_, "%s%s", cells[i].c_str(), i + 1 < cells.size() ? "," : "\r\n");
}

void save_field(const BrokenField& f, const std::filesystem::path& csv_path,
                double time_stamp) {
  std::vector<std::string> header{"element_index"};
  for (int k = 0; k <= f.degree(); ++k) header.push_back("coeff_" + std::to_string(k));
  CsvWriter csv(csv_path, header);
  for (int i = 0; i < f.n_elements(); ++i) {
    std::vector<std::string> cells{std::to_string(i)};
    for (int k = 0; k <= f.degree(); ++k) cells.push_back(CsvWriter::num(f.coeff(i, k)));
    csv.row_mixed(cells);
  }
  std::filesystem::path side = csv_path;
  side.replace_extension(".json");
  FILE* j = std::fopen(side.string().c_str(), "wb");
  if (!j) throw std::runtime_error("cannot open " + side.string());
  std::fprintf(j,
               "{\n  \"mesh_hash\": \"%016" PRIx64 "\",\n  \"degree\": %d,\n"
               "  \"time_stamp\": %.17g\n}\n",
               f.mesh()->content_hash(), f.degree(), time_stamp);
  std::fclose(j);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

} // namespace vcdg
