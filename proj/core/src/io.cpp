#include "lpfield/io.hpp"

#include <cstdio>
#include <sstream>

namespace lpfield::io {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, bool allow_overwrite) {
  if (!allow_overwrite && std::filesystem::exists(path)) {
    throw ContractError("output file already exists: " + path.string());
  }
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  out_.open(path);
  if (!out_) throw ContractError("cannot open output file: " + path.string());
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
  require(!header_written_, "CsvWriter: preamble must precede the header");
  out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::comment_line(const std::string& line) {
  require(!header_written_, "CsvWriter: preamble must precede the header");
  out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
  header_written_ = true;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out_ << ",";
    out_ << cols[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

void CsvWriter::close() {
  out_.flush();
  out_.close();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

CsvContent read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open input file: " + path.string());
  CsvContent c;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      auto eq = body.find('=');
      if (eq != std::string::npos) {
        c.preamble[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      }
      continue;
    }
    if (!header_seen) {
      c.header = split_csv_line(line);
      header_seen = true;
    } else {
      c.rows.push_back(split_csv_line(line));
    }
  }
  return c;
}

void write_grid_function(const std::filesystem::path& path,
                         const GridFunction& f, bool allow_overwrite,
                         const std::map<std::string, std::string>& extra) {
  CsvWriter w(path, allow_overwrite);
  w.comment_line("lpfield grid-function v1");
  w.comment("d", std::to_string(f.spec().d));
  w.comment("K", std::to_string(f.spec().K));
  w.comment("side", f.side() == Side::physical ? "physical" : "frequency");
  for (const auto& [k, v] : extra) w.comment(k, v);
  std::vector<std::string> cols{"i0"};
  if (f.spec().d == 2) cols.push_back("i1");
  cols.push_back("re");
  cols.push_back("im");
  w.header(cols);
  for (std::size_t i = 0; i < f.size(); ++i) {
    IVec2 iv = f.side() == Side::physical ? unravel(f.spec(), i)
                                          : freq_point(f.spec(), i);
    std::vector<std::string> cells{std::to_string(iv[0])};
    if (f.spec().d == 2) cells.push_back(std::to_string(iv[1]));
    cells.push_back(g17(f[i].real()));
    cells.push_back(g17(f[i].imag()));
    w.row(cells);
  }
  w.close();
}

GridFunction read_grid_function(const std::filesystem::path& path) {
  CsvContent c = read_csv(path);
  require(c.preamble.count("d") && c.preamble.count("K") &&
              c.preamble.count("side"),
          "grid-function CSV: preamble must carry d, K, side");
  GridSpec spec(std::stoi(c.preamble.at("d")), std::stoi(c.preamble.at("K")));
  Side side = c.preamble.at("side") == "frequency" ? Side::frequency
                                                   : Side::physical;
  GridFunction f(spec, side);
  const std::size_t ncols = (spec.d == 2 ? 4u : 3u);
  for (const auto& r : c.rows) {
    require(r.size() == ncols, "grid-function CSV: bad row width");
    IVec2 iv{std::stoi(r[0]), spec.d == 2 ? std::stoi(r[1]) : 0};
    const double re = std::stod(r[spec.d == 2 ? 2 : 1]);
    const double im = std::stod(r[spec.d == 2 ? 3 : 2]);
    std::size_t idx = side == Side::physical ? ravel(spec, iv)
                                             : freq_index(spec, iv);
    f[idx] = {re, im};
  }
  return f;
}

void write_sequence_coeffs(const std::filesystem::path& path,
                           const SequenceCoeffs& b, bool allow_overwrite) {
  CsvWriter w(path, allow_overwrite);
  w.comment_line("lpfield sequence-coeffs v1");
  w.comment("d", std::to_string(b.dim()));
  w.comment("max_level", std::to_string(b.max_level()));
  std::vector<std::string> cols{"level", "c0"};
  if (b.dim() == 2) cols.push_back("c1");
  cols.push_back("re");
  cols.push_back("im");
  w.header(cols);
  for (const auto& [q, v] : b.entries()) {
    std::vector<std::string> row{std::to_string(q.level),
                                 std::to_string(q.corner[0])};
    if (b.dim() == 2) row.push_back(std::to_string(q.corner[1]));
    row.push_back(g17(v.real()));
    row.push_back(g17(v.imag()));
    w.row(row);
  }
  w.close();
}

SequenceCoeffs read_sequence_coeffs(const std::filesystem::path& path) {
  CsvContent c = read_csv(path);
  require(c.preamble.count("d") && c.preamble.count("max_level"),
          "sequence-coeffs CSV: preamble must carry d, max_level");
  const int d = std::stoi(c.preamble.at("d"));
  SequenceCoeffs b(d, std::stoi(c.preamble.at("max_level")));
  const std::size_t ncols = (d == 2 ? 5u : 4u);
  for (const auto& r : c.rows) {
    require(r.size() == ncols, "sequence-coeffs CSV: bad row width");
    DyadicCube q{std::stoi(r[0]), {std::stoi(r[1]), d == 2 ? std::stoi(r[2]) : 0}};
    b.set(q, {std::stod(r[d == 2 ? 3 : 2]), std::stod(r[d == 2 ? 4 : 3])});
  }
  return b;
}

std::map<std::string, std::string> read_config(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open config file: " + path.string());
  std::map<std::string, std::string> cfg;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    require(eq != std::string::npos, "config: expected key=value, got: " + t);
    cfg[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

bool files_byte_identical(const std::filesystem::path& a,
                          const std::filesystem::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::string sa((std::istreambuf_iterator<char>(fa)),
                 std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(fb)),
                 std::istreambuf_iterator<char>());
  return sa == sb;
}

}  // namespace lpfield::io
