#include "subiso/lines.hpp"

#include <numeric>
#include <queue>

namespace subiso {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

void validate_edges(const FrameGraph& g) {
  if (g.n < 1) throw InvalidInput("frame graph: needs at least one vertex");
  std::pair<int, int> prev{-1, -1};
  for (const auto& e : g.edges) {
    if (e.first < 0 || e.second >= g.n || e.first >= e.second)
      throw InvalidInput("frame graph: malformed edge");
    if (!(prev < e)) throw InvalidInput("frame graph: edges not lex-sorted");
    prev = e;
  }
}

// Unique forest path from s to t (both known to be connected).
std::vector<int> forest_path(const std::vector<std::vector<int>>& adj, int s, int t) {
  std::vector<int> prev(adj.size(), -1);
  std::queue<int> bfs;
  bfs.push(s);
  prev[s] = s;
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    if (v == t) break;
    for (int w : adj[v])
      if (prev[w] < 0) {
        prev[w] = v;
        bfs.push(w);
      }
  }
  std::vector<int> path;
  for (int v = t; v != s; v = prev[v]) path.push_back(v);
  path.push_back(s);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

ForestWithCycles canonical_forest(const FrameGraph& g) {
  validate_edges(g);
  ForestWithCycles out;
  UnionFind uf(g.n);
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {  // lex scan order is the canonical choice
    if (uf.unite(e.first, e.second)) {
      out.forest_edges.push_back(e);
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    } else {
      out.cycle_edges.push_back(e);
    }
  }
  for (const auto& e : out.cycle_edges)
    out.cycles.push_back(forest_path(adj, e.first, e.second));
  return out;
}

}  // namespace subiso
