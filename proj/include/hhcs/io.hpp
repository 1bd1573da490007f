#pragma once

// CSV and PGM files. Numbers are written with 17 significant digits so that
// a value read back is bit-identical to the one written.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hhcs/sampling.hpp"

namespace hhcs::io {

std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::size_t v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(bool v) { return cell(static_cast<long long>(v ? 1 : 0)); }
  CsvWriter& cell(std::string_view v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

// Opens for writing, creating parent directories; throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

// "index,value" rows with 1-based indices.
void write_vector_csv(std::ostream& out, std::span<const double> values);
void write_vector_csv(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_vector_csv(const std::filesystem::path& path);

// "position,index,weight" rows, positions 1-based in draw order.
void write_sample_csv(std::ostream& out, const SampleSet& sample);
void write_sample_csv(const std::filesystem::path& path, const SampleSet& sample);
SampleSet read_sample_csv(const std::filesystem::path& path);

// Binary (P5) greyscale, row-major.
void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const unsigned char> pixels);
// Column-major n x n image, rescaled linearly from [min, max] to [0, 255].
void write_image_pgm(const std::filesystem::path& path, std::span<const double> image,
                     std::size_t n);
// Column-major n x n image as "row,col,value" rows (0-based, row 0 on top).
void write_image_csv(const std::filesystem::path& path, std::span<const double> image,
                     std::size_t n);

}  // namespace hhcs::io
