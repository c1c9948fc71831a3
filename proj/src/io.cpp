#include "wshift/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wshift::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view field, const std::filesystem::path& path, std::size_t lineno) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(Errc::ParseError, path.string() + ":" + std::to_string(lineno) + ": bad field '" +
                                      std::string(field) + "'");
  return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    lines.push_back(line);
  return lines;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out)
    throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_matrix_csv(const std::filesystem::path& path, const std::vector<Vector>& rows,
                      std::string_view column_prefix) {
  const std::size_t q = rows.empty() ? 0 : rows.front().size();
  std::string text;
  for (std::size_t k = 0; k < q; ++k) {
    if (k)
      text += ',';
    text += column_prefix;
    text += std::to_string(k);
  }
  text += '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k)
        text += ',';
      text += format_double(r[k]);
    }
    text += '\n';
  }
  write_text(path, text);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || trim(lines.front()).empty())
    throw Error(Errc::ParseError, path.string() + ": missing header");
  Matrix m;
  for (auto f : split(lines.front()))
    m.header.emplace_back(f);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty())
      continue;
    const auto fields = split(lines[i]);
    if (fields.size() != m.header.size())
      throw Error(Errc::ParseError, path.string() + ":" + std::to_string(i + 1) + ": expected " +
                                        std::to_string(m.header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
    Vector row;
    row.reserve(fields.size());
    for (auto f : fields) {
      const double v = parse_field<double>(f, path, i + 1);
      if (!std::isfinite(v))
        throw Error(Errc::ParseError, path.string() + ":" + std::to_string(i + 1) +
                                          ": non-finite value");
      row.push_back(v);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::string text = "label\n";
  for (int l : labels) {
    text += std::to_string(l);
    text += '\n';
  }
  write_text(path, text);
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || trim(lines.front()) != "label")
    throw Error(Errc::ParseError, path.string() + ": expected header 'label'");
  std::vector<int> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto field = trim(lines[i]);
    if (field.empty())
      continue;
    labels.push_back(parse_field<int>(field, path, i + 1));
  }
  return labels;
}

} // namespace wshift::io
