#include "hhcs/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hhcs/error.hpp"

namespace hhcs::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
}

std::size_t parse_index(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad index '" + s + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  bool first = true;
  for (std::string_view h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::sep() {
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::size_t v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw InvalidArgument("csv row has " + std::to_string(filled_) + " cells, header " +
                          std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_vector_csv(std::ostream& out, std::span<const double> values) {
  CsvWriter csv(out, {"index", "value"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv.cell(i + 1).cell(values[i]);
    csv.end_row();
  }
}

void write_vector_csv(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out = open_output(path);
  write_vector_csv(out, values);
}

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::vector<std::pair<std::size_t, double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (lineno == 1 && !cells.empty() && cells[0] == "index") continue;
    if (cells.size() == 1) {
      rows.emplace_back(rows.size() + 1, parse_double(cells[0], path, lineno));
    } else if (cells.size() >= 2) {
      rows.emplace_back(parse_index(cells[0], path, lineno), parse_double(cells[1], path, lineno));
    }
  }
  std::vector<double> out(rows.size(), 0.0);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [index, value] : rows) {
    if (index < 1 || index > rows.size() || seen[index - 1]) {
      throw IoError(path.string() + ": indices must be a permutation of 1.." +
                    std::to_string(rows.size()));
    }
    seen[index - 1] = true;
    out[index - 1] = value;
  }
  return out;
}

void write_sample_csv(std::ostream& out, const SampleSet& sample) {
  CsvWriter csv(out, {"position", "index", "weight"});
  for (std::size_t j = 0; j < sample.size(); ++j) {
    csv.cell(j + 1).cell(sample.omega[j]).cell(sample.weights[j]);
    csv.end_row();
  }
}

void write_sample_csv(const std::filesystem::path& path, const SampleSet& sample) {
  std::ofstream out = open_output(path);
  write_sample_csv(out, sample);
}

SampleSet read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  SampleSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (lineno == 1 && !cells.empty() && cells[0] == "position") continue;
    if (cells.size() != 3) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    out.omega.push_back(parse_index(cells[1], path, lineno));
    out.weights.push_back(parse_double(cells[2], path, lineno));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const unsigned char> pixels) {
  if (pixels.size() != rows * cols) throw ShapeError("pgm pixel count does not match its size");
  std::ofstream out = open_output(path);
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void write_image_pgm(const std::filesystem::path& path, std::span<const double> image,
                     std::size_t n) {
  if (image.size() != n * n) throw ShapeError("image is not " + std::to_string(n) + " x " + std::to_string(n));
  const auto [lo_it, hi_it] = std::minmax_element(image.begin(), image.end());
  const double lo = image.empty() ? 0.0 : *lo_it;
  const double span = image.empty() ? 0.0 : *hi_it - lo;
  std::vector<unsigned char> pixels(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = span > 0.0 ? (image[i + n * j] - lo) / span : 0.0;
      pixels[i * n + j] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
  }
  write_pgm(path, n, n, pixels);
}

void write_image_csv(const std::filesystem::path& path, std::span<const double> image,
                     std::size_t n) {
  if (image.size() != n * n) throw ShapeError("image is not " + std::to_string(n) + " x " + std::to_string(n));
  std::ofstream out = open_output(path);
  CsvWriter csv(out, {"row", "col", "value"});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      csv.cell(i).cell(j).cell(image[i + n * j]);
      csv.end_row();
    }
  }
}

}  // namespace hhcs::io
