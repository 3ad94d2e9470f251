// Tabular reports with a provenance header, written as CSV or JSON.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epinet::cli {

struct Provenance {
  std::string version;
  std::string flags;  ///< the command line as given
  std::uint64_t seed = 0;
  std::string line() const;  ///< `# epinet <version> | <flags> | seed=<seed>`
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

enum class Format { csv, json, text };

void write_table(std::ostream& out, const Table& t, const Provenance& p, Format f);

std::string fmt(double x);
std::string fmt(long long x);
inline std::string fmt(int x) { return fmt(static_cast<long long>(x)); }
inline std::string fmt(std::size_t x) { return fmt(static_cast<long long>(x)); }
inline std::string fmt(bool b) { return b ? "true" : "false"; }

}  // namespace epinet::cli
