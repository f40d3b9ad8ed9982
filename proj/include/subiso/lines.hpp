#pragma once

// Tuples of lines (rank-1 subspaces) up to isometry. The deciding invariant
// is the frame graph together with all 2-products and one m-product per
// fundamental cycle of a canonical spanning forest.

#include "subiso/core.hpp"
#include "subiso/tuple.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace subiso {

template <class T>
struct LineTuple {
  int d = 0;
  std::vector<Vec<T>> vectors;  // unit spanning vectors

  int n() const { return static_cast<int>(vectors.size()); }
};

// Normalizes the spanning vectors; throws RankDeficient on a zero vector.
template <class T>
LineTuple<T> make_line_tuple(int d, std::vector<Vec<T>> vectors,
                             const Tolerances& tol = {}) {
  if (d <= 0) throw InvalidInput("line tuple: d must be positive");
  if (vectors.empty()) throw InvalidInput("line tuple: needs at least one line");
  for (auto& v : vectors) {
    if (v.size() != d) throw ShapeMismatch("line tuple: vector of wrong dimension");
    const double nrm = v.norm();
    if (!(nrm > tol.rank_rel)) throw RankDeficient("line tuple: zero spanning vector");
    v /= nrm;
  }
  LineTuple<T> t;
  t.d = d;
  t.vectors = std::move(vectors);
  return t;
}

template <class T>
LineTuple<T> line_tuple_from_subspaces(const SubspaceTuple<T>& t,
                                       const Tolerances& tol = {}) {
  std::vector<Vec<T>> vs;
  for (const auto& b : t.bases) {
    if (b.cols() != 1)
      throw InapplicableMethod("line tuple: every subspace must have rank 1");
    vs.push_back(b.col(0));
  }
  return make_line_tuple<T>(t.d, std::move(vs), tol);
}

// Generalized Bargmann m-product over a closed index sequence:
//   <v_i1,v_i2><v_i2,v_i3>...<v_im,v_i1>,
// the trace of the corresponding product of rank-1 projections.
template <class T>
T bargmann_product(const LineTuple<T>& t, const std::vector<int>& seq) {
  if (seq.empty()) throw InvalidInput("bargmann_product: empty index sequence");
  T prod = T(1);
  for (std::size_t a = 0; a < seq.size(); ++a) {
    const int i = seq[a], j = seq[(a + 1) % seq.size()];
    if (i < 0 || i >= t.n() || j < 0 || j >= t.n())
      throw InvalidInput("bargmann_product: index out of range");
    prod *= t.vectors[i].dot(t.vectors[j]);  // conjugate-linear in the first slot
  }
  return prod;
}

// Vertices are line indices; an edge joins i<j iff the lines are not
// orthogonal (|<v_i,v_j>| above the orth tolerance). Edges kept lex-sorted.
struct FrameGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  bool operator==(const FrameGraph&) const = default;
};

template <class T>
FrameGraph frame_graph(const LineTuple<T>& t, const Tolerances& tol = {}) {
  FrameGraph g;
  g.n = t.n();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (std::abs(t.vectors[i].dot(t.vectors[j])) > tol.orth)
        g.edges.emplace_back(i, j);
  return g;
}

// Canonical spanning forest by union-find over lex-ordered edges, plus one
// fundamental cycle per rejected edge. A cycle is stored as its vertex
// sequence starting at the rejected edge's smaller endpoint, walking first
// along the forest path (the closing step uses the rejected edge itself).
struct ForestWithCycles {
  std::vector<std::pair<int, int>> forest_edges;
  std::vector<std::pair<int, int>> cycle_edges;  // rejected edges, lex order
  std::vector<std::vector<int>> cycles;          // matching vertex sequences

  bool operator==(const ForestWithCycles&) const = default;
};

ForestWithCycles canonical_forest(const FrameGraph& g);

// Full line invariant: frame graph, canonical forest, the n x n table of
// 2-products |<v_i,v_j>|^2, and the canonically oriented cycle products.
template <class T>
struct LineInvariant {
  FrameGraph graph;
  ForestWithCycles forest;
  Mat<double> two_products;
  std::vector<T> cycle_products;
};

template <class T>
LineInvariant<T> line_invariant(const LineTuple<T>& t, const Tolerances& tol = {}) {
  LineInvariant<T> inv;
  inv.graph = frame_graph(t, tol);
  inv.forest = canonical_forest(inv.graph);
  inv.two_products.setZero(t.n(), t.n());
  for (int i = 0; i < t.n(); ++i)
    for (int j = 0; j < t.n(); ++j) {
      const T ip = t.vectors[i].dot(t.vectors[j]);
      inv.two_products(i, j) = std::norm(ip);  // |<v_i,v_j>|^2
    }
  for (const auto& cyc : inv.forest.cycles)
    inv.cycle_products.push_back(bargmann_product(t, cyc));
  return inv;
}

namespace detail {
inline bool trace_close(double a, double b, const Tolerances& tol) {
  return std::abs(a - b) <= tol.trace_cmp * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool trace_close(const cplx& a, const cplx& b, const Tolerances& tol) {
  return std::abs(a - b) <= tol.trace_cmp * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace detail

// Fixed-order decision. The ambient dimensions need not match: the invariant
// is determined by the Gramian, so tuples embed isometrically into any
// common dimension. Cycle products are compared as signed reals (real case)
// or as complex values (complex case) in the canonical orientation.
template <class T>
DecisionReport lines_isomorphic(const LineTuple<T>& a, const LineTuple<T>& b,
                                const Tolerances& tol = {}) {
  DecisionReport rep;
  rep.method = "lines";
  if (a.n() != b.n()) {
    rep.detail = "line counts differ";
    return rep;
  }
  const LineInvariant<T> ia = line_invariant(a, tol);
  const LineInvariant<T> ib = line_invariant(b, tol);
  if (!(ia.graph == ib.graph)) {
    rep.detail = "frame graphs differ";
    return rep;
  }
  if (!(ia.forest == ib.forest)) {
    rep.detail = "canonical forests differ";  // unreachable when graphs match
    return rep;
  }
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (!detail::trace_close(ia.two_products(i, j), ib.two_products(i, j), tol)) {
        rep.detail = "2-product (" + std::to_string(i) + "," + std::to_string(j) +
                     ") differs";
        return rep;
      }
  for (std::size_t c = 0; c < ia.cycle_products.size(); ++c)
    if (!detail::trace_close(ia.cycle_products[c], ib.cycle_products[c], tol)) {
      rep.detail = "cycle product " + std::to_string(c) + " differs";
      return rep;
    }
  rep.isomorphic = true;
  rep.detail = "frame graph, 2-products and cycle products all match";
  return rep;
}

// Permutation-invariant necessary condition: the sorted multiset of
// off-diagonal 2-products must match. Cheap pre-screen, never sufficient.
template <class T>
bool two_product_histogram_equal(const LineTuple<T>& a, const LineTuple<T>& b,
                                 const Tolerances& tol = {}) {
  if (a.n() != b.n()) return false;
  auto hist = [](const LineTuple<T>& t) {
    std::vector<double> h;
    for (int i = 0; i < t.n(); ++i)
      for (int j = i + 1; j < t.n(); ++j)
        h.push_back(std::norm(t.vectors[i].dot(t.vectors[j])));
    std::sort(h.begin(), h.end());
    return h;
  };
  const auto ha = hist(a), hb = hist(b);
  for (std::size_t i = 0; i < ha.size(); ++i)
    if (!detail::trace_close(ha[i], hb[i], tol)) return false;
  return true;
}

// Normalized Gramian for a star-spanning configuration: G = D A D* with
// D = diag(sgn<v_1,v_j>) and sgn(r e^{i phi}) = e^{i phi}. Requires the
// first line to be non-orthogonal to every other line.
template <class T>
Mat<T> normalized_gramian(const LineTuple<T>& t, const Tolerances& tol = {}) {
  const int n = t.n();
  Mat<T> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = t.vectors[i].dot(t.vectors[j]);
  std::vector<T> dsgn(n);
  for (int j = 0; j < n; ++j) {
    const T ip = a(0, j);
    if (!(std::abs(ip) > tol.orth))
      throw StarConditionViolated(
          "normalized_gramian: line " + std::to_string(j) +
          " is orthogonal to line 0; fall back to the cycle invariant");
    dsgn[j] = ip / std::abs(ip);
  }
  Mat<T> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = dsgn[i] * a(i, j) * scalar_traits<T>::conj(dsgn[j]);
  return g;
}

}  // namespace subiso
