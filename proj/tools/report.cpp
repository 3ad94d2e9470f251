#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>

namespace epinet::cli {

std::string Provenance::line() const {
  return "# epinet " + version + " | " + flags + " | seed=" + std::to_string(seed);
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt(long long x) { return std::to_string(x); }

namespace {

nlohmann::json cell(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return nullptr;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end && *end == '\0' && std::isfinite(v)) return v;
  return s;
}

}  // namespace

void write_table(std::ostream& out, const Table& t, const Provenance& p, Format f) {
  if (f == Format::text) {
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
      w[c] = t.columns[c].size();
      for (const auto& r : t.rows)
        if (c < r.size()) w[c] = std::max(w[c], r[c].size());
    }
    auto emit = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < w.size(); ++c) {
        const std::string& s = c < r.size() ? r[c] : std::string();
        out << (c ? "  " : "") << s << std::string(c + 1 < w.size() ? w[c] - s.size() : 0, ' ');
      }
      out << '\n';
    };
    out << p.line() << '\n';
    emit(t.columns);
    for (const auto& r : t.rows) emit(r);
    return;
  }
  if (f == Format::csv) {
    out << p.line() << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json j;
  j["provenance"] = {{"version", p.version}, {"flags", p.flags}, {"seed", p.seed}};
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t c = 0; c < t.columns.size() && c < r.size(); ++c) o[t.columns[c]] = cell(r[c]);
    j["rows"].push_back(o);
  }
  out << j.dump(2) << '\n';
}

}  // namespace epinet::cli
