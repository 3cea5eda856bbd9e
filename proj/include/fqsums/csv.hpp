#pragma once

// Minimal CSV: header + rows of plain cells (numbers, decimal strings).
// Cells may not contain commas, quotes or newlines; the writer rejects them
// rather than quoting, and the reader rejects ragged rows. Round-tripping a
// table through write/read preserves every cell byte for byte.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fqsums::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline void check_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") != std::string::npos)
    throw std::invalid_argument("csv cell contains a delimiter or quote: " + cell);
}

inline std::string write(const Table& t) {
  if (t.header.empty()) throw std::invalid_argument("csv table needs a header");
  std::ostringstream os;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    check_cell(t.header[i]);
    os << t.header[i] << (i + 1 < t.header.size() ? ',' : '\n');
  }
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size())
      throw std::invalid_argument("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      check_cell(row[i]);
      os << row[i] << (i + 1 < row.size() ? ',' : '\n');
    }
  }
  return os.str();
}

inline Table read(std::string_view text) {
  Table t;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        cells.emplace_back(line.substr(start));
        break;
      }
      cells.emplace_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw std::runtime_error("csv row width does not match header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::runtime_error("csv input is empty");
  return t;
}

inline void write_file(const Table& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << write(t);
  if (!os) throw std::runtime_error("short write: " + path);
}

inline Table read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return read(buf.str());
}

}  // namespace fqsums::csv
