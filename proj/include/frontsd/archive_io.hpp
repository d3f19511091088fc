#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "frontsd/dominance.hpp"

namespace frontsd {

/// `%.17g` text; parses back to the identical double.
std::string format_double(double value);
/// Parses a full token as a double; throws FormatError on trailing garbage.
double parse_double(std::string_view token, std::size_t line);

/// Writes `id,parent_id,x_1..x_n,f_1..f_m`, rows ordered by id.
void write_archive_csv(std::ostream& out, const Archive& archive, int n, int m);
void write_archive_csv(const std::string& path, const Archive& archive, int n, int m);

/// Rows as read, without dominance validation (validate_front reports on those).
struct ArchiveCsv {
  int n = 0;
  int m = 0;
  std::vector<FrontMember> members;
  /// File line of each member row, for diagnostics.
  std::vector<std::size_t> lines;
};

ArchiveCsv read_archive_csv(std::istream& in);
ArchiveCsv read_archive_csv(const std::string& path);

/// Splits one CSV record on commas (no quoting; the schemas never need it).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace frontsd
