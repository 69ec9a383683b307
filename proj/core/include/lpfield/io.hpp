#ifndef LPFIELD_IO_HPP
#define LPFIELD_IO_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "lpfield/grid.hpp"
#include "lpfield/spaces.hpp"

namespace lpfield::io {

/// Floating-point formatting used in every CSV cell: 17 significant digits,
/// enough to round-trip IEEE doubles for cross-language regression checks.
std::string g17(double v);

/// CSV file with a `# key=value` preamble carrying the resolved configuration
/// of the run, then an RFC-4180-style header row and data rows. Output files
/// are write-once: opening an existing path is a contract error.
class CsvWriter {
public:
  explicit CsvWriter(const std::filesystem::path& path,
                     bool allow_overwrite = false);
  void comment(const std::string& key, const std::string& value);
  void comment_line(const std::string& line);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);
  void close();

private:
  std::ofstream out_;
  bool header_written_ = false;
};

struct CsvContent {
  std::map<std::string, std::string> preamble;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvContent read_csv(const std::filesystem::path& path);

/// GridFunction schema: preamble carries d, K, side; columns are the per-axis
/// index (storage index on the physical side, signed frequency component on
/// the frequency side) followed by re, im.
void write_grid_function(
    const std::filesystem::path& path, const GridFunction& f,
    bool allow_overwrite = false,
    const std::map<std::string, std::string>& extra_preamble = {});
GridFunction read_grid_function(const std::filesystem::path& path);

/// SequenceCoeffs schema: preamble carries d and max_level; columns are
/// (level, corner indices..., re, im), rows in lexicographic cube order.
void write_sequence_coeffs(const std::filesystem::path& path,
                           const SequenceCoeffs& b,
                           bool allow_overwrite = false);
SequenceCoeffs read_sequence_coeffs(const std::filesystem::path& path);

/// Plain-text key=value configuration (one per line, '#' comments).
std::map<std::string, std::string> read_config(
    const std::filesystem::path& path);

bool files_byte_identical(const std::filesystem::path& a,
                          const std::filesystem::path& b);

}  // namespace lpfield::io

#endif
