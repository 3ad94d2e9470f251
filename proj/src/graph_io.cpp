#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "epinet/graph.hpp"

namespace epinet {

namespace {

[[noreturn]] void parse_error(int line, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + msg);
}

bool blank_or_comment(const std::string& s) {
  auto p = s.find_first_not_of(" \t\r");
  return p == std::string::npos || s[p] == '#';
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  long long n = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "N" || !(ls >> n) || n <= 0) parse_error(lineno, "expected header `N <vertex_count>`");
    break;
  }
  if (n <= 0) throw std::runtime_error("edge list: missing `N <vertex_count>` header");
  std::vector<Edge> edges;
  bool loops = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v)) parse_error(lineno, "expected `u v`");
    std::string extra;
    if (ls >> extra) parse_error(lineno, "trailing text after `u v`");
    if (u < 0 || v < 0 || u >= n || v >= n) parse_error(lineno, "vertex index out of range");
    loops |= u == v;
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  Graph probe(static_cast<int>(n), true, true);
  for (auto [u, v] : edges) probe.add_edge(u, v);
  auto sorted = probe.canonical_edges();
  bool multi = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
  Graph g(static_cast<int>(n), loops, multi);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "N " << g.vertex_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void read_attributes(std::istream& in, Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> types(n, 0), houses(n, -1);
  bool any_type = false, any_house = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    f.push_back(cur);
    if (f.size() != 3) parse_error(lineno, "expected `vertex,type,household`");
    if (f[0] == "vertex") continue;  // header row
    try {
      int u = std::stoi(f[0]);
      if (u < 0 || u >= n) parse_error(lineno, "vertex index out of range");
      if (!f[1].empty()) {
        types[u] = std::stoi(f[1]);
        if (types[u] < 1) parse_error(lineno, "type labels start at 1");
        any_type = true;
      }
      if (!f[2].empty()) {
        houses[u] = std::stoi(f[2]);
        any_house = true;
      }
    } catch (const std::logic_error&) {
      parse_error(lineno, "non-integer field");
    }
  }
  if (any_type) g.types = std::move(types);
  if (any_house) g.households = std::move(houses);
}

void write_attributes(std::ostream& out, const Graph& g) {
  out << "vertex,type,household\n";
  for (int u = 0; u < g.vertex_count(); ++u) {
    out << u << ',';
    if (!g.types.empty()) out << g.types[u];
    out << ',';
    if (!g.households.empty()) out << g.households[u];
    out << '\n';
  }
}

}  // namespace epinet
