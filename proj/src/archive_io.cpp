#include "frontsd/archive_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "frontsd/errors.hpp"

namespace frontsd {

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("cannot parse number '" + std::string(token) + "'", line);
  }
  return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

void write_archive_csv(std::ostream& out, const Archive& archive, int n, int m) {
  out << "id,parent_id";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int j = 1; j <= m; ++j) out << ",f_" << j;
  out << '\n';
  for (const auto& member : archive) {
    if (member.x.size() != n || static_cast<int>(member.fx.size()) != m) {
      throw UsageError("write_archive_csv: member dimensions do not match n/m");
    }
    out << member.id << ',';
    if (member.parent_id) out << *member.parent_id;
    for (Eigen::Index i = 0; i < member.x.size(); ++i) out << ',' << format_double(member.x[i]);
    for (std::size_t j = 0; j < member.fx.size(); ++j) out << ',' << format_double(member.fx[j]);
    out << '\n';
  }
}

void write_archive_csv(const std::string& path, const Archive& archive, int n, int m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  write_archive_csv(out, archive, n, m);
}

namespace {

std::uint64_t parse_id(const std::string& token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError("cannot parse id '" + token + "'", line);
  }
  return value;
}

}  // namespace

ArchiveCsv read_archive_csv(std::istream& in) {
  ArchiveCsv result;
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(in, text)) throw FormatError("missing header", 1);
  ++line_no;
  const auto header = split_csv_line(text);
  if (header.size() < 2 || header[0] != "id" || header[1] != "parent_id") {
    throw FormatError("header must start with id,parent_id", line_no);
  }
  std::size_t col = 2;
  while (col < header.size() && header[col] == "x_" + std::to_string(result.n + 1)) {
    ++result.n;
    ++col;
  }
  while (col < header.size() && header[col] == "f_" + std::to_string(result.m + 1)) {
    ++result.m;
    ++col;
  }
  if (col != header.size()) {
    throw FormatError("unexpected header column '" + header[col] + "'", line_no);
  }
  if (result.n < 1) throw FormatError("header has no x_ columns", line_no);
  if (result.m < 1) throw FormatError("header has no f_ columns", line_no);

  const std::size_t width = 2 + static_cast<std::size_t>(result.n + result.m);
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty() || text == "\r") continue;
    const auto cells = split_csv_line(text);
    if (cells.size() != width) {
      throw FormatError("expected " + std::to_string(width) + " columns, found " +
                            std::to_string(cells.size()),
                        line_no);
    }
    FrontMember member;
    member.id = parse_id(cells[0], line_no);
    if (!cells[1].empty()) member.parent_id = parse_id(cells[1], line_no);
    member.x.resize(result.n);
    for (int i = 0; i < result.n; ++i) {
      member.x[i] = parse_double(cells[2 + static_cast<std::size_t>(i)], line_no);
    }
    Eigen::VectorXd f(result.m);
    for (int j = 0; j < result.m; ++j) {
      f[j] = parse_double(cells[2 + static_cast<std::size_t>(result.n + j)], line_no);
    }
    try {
      member.fx = ObjectiveVector(std::move(f));
    } catch (const InputError& e) {
      throw FormatError(e.what(), line_no);
    }
    result.members.push_back(std::move(member));
    result.lines.push_back(line_no);
  }
  return result;
}

ArchiveCsv read_archive_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_archive_csv(in);
}

}  // namespace frontsd
