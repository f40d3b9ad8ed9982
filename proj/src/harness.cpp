#include "subiso/harness.hpp"

#include <cstdio>
#include <sstream>

namespace subiso {

SimpleGraph make_simple_graph(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw InvalidInput("make_simple_graph: need n >= 1");
  for (auto& [i, j] : edges) {
    if (i == j) throw InvalidInput("make_simple_graph: loop edge");
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n) throw InvalidInput("make_simple_graph: vertex out of range");
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k] == edges[k - 1])
      throw InvalidInput("make_simple_graph: duplicate edge");
  return {n, std::move(edges)};
}

SimpleGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  int n = 0, m = 0;
  if (!(in >> tag) || tag != "graph")
    throw ParseError("graph: expected header starting with 'graph'");
  char eq;
  if (!(in >> tag) || tag.rfind("v=", 0) != 0 ||
      std::sscanf(tag.c_str(), "v=%d%c", &n, &eq) != 1)
    throw ParseError("graph: expected v=<n>");
  if (!(in >> tag) || tag.rfind("e=", 0) != 0 ||
      std::sscanf(tag.c_str(), "e=%d%c", &m, &eq) != 1)
    throw ParseError("graph: expected e=<m>");
  if (n < 1 || m < 0) throw ParseError("graph: invalid counts");
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < m; ++k) {
    int i = 0, j = 0;
    if (!(in >> i >> j))
      throw ParseError("graph: expected edge line " + std::to_string(k + 1));
    if (i < 1 || j < 1 || i >= j || j > n)
      throw ParseError("graph: edge " + std::to_string(k + 1) +
                       " must satisfy 1 <= i < j <= v");
    edges.emplace_back(i - 1, j - 1);
  }
  std::string rest;
  if (in >> rest) throw ParseError("graph: trailing content after edge list");
  return make_simple_graph(n, std::move(edges));
}

std::string serialize_graph(const SimpleGraph& g) {
  std::string out = "graph v=" + std::to_string(g.n) +
                    " e=" + std::to_string(g.edges.size()) + "\n";
  for (const auto& [i, j] : g.edges)
    out += std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
  return out;
}

std::vector<int> degrees(const SimpleGraph& g) {
  std::vector<int> deg(g.n, 0);
  for (const auto& [i, j] : g.edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

std::optional<int> regular_degree(const SimpleGraph& g) {
  const auto deg = degrees(g);
  for (int d : deg)
    if (d != deg[0]) return std::nullopt;
  return deg[0];
}

LineTuple<double> adversarial_line_family(int d, int epsilon) {
  if (d < 3) throw DimensionTooSmall("adversarial_line_family: need d >= 3");
  if (epsilon != 1 && epsilon != -1)
    throw InvalidInput("adversarial_line_family: epsilon must be +1 or -1");
  std::vector<Vec<double>> vectors;
  for (int i = 0; i < d; ++i) {
    Vec<double> v = Vec<double>::Zero(d);
    v(i) = 1;
    if (i + 1 < d)
      v(i + 1) = 1;
    else
      v(0) = epsilon;  // closing vector e_d + eps * e_1
    vectors.push_back(std::move(v));
  }
  return make_line_tuple<double>(d, vectors);
}

}  // namespace subiso
