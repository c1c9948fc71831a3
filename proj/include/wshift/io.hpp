#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wshift/core.hpp"

namespace wshift::io {

/// 17 significant digits, lossless for doubles.
std::string format_double(double v);

struct Matrix {
  std::vector<std::string> header;
  std::vector<Vector> rows;
};

/// Header `<prefix>0..<prefix>{q-1}`, one row per vector.
void write_matrix_csv(const std::filesystem::path& path, const std::vector<Vector>& rows,
                      std::string_view column_prefix = "bin_");
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Single column with header `label`.
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

} // namespace wshift::io
