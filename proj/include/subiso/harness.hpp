#pragma once

// Test-instance generation and oracles: graph-to-subspace reductions, orbit
// constructors (isometry / GL), the adversarial L(+/-) line family, and a
// brute-force permutation-isomorphism search for small tuples.

#include "subiso/algebra.hpp"
#include "subiso/core.hpp"
#include "subiso/glauto.hpp"
#include "subiso/lines.hpp"
#include "subiso/rng.hpp"
#include "subiso/tuple.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subiso {

// Simple undirected graph, 0-based vertices, edges lex-sorted with i < j.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

// Validates, normalizes edge orientation, sorts; rejects loops/duplicates.
SimpleGraph make_simple_graph(int n, std::vector<std::pair<int, int>> edges);

// Text format: "graph v=<n> e=<m>" then m lines "i j", 1-based, i < j.
SimpleGraph parse_graph(const std::string& text);
std::string serialize_graph(const SimpleGraph& g);

std::vector<int> degrees(const SimpleGraph& g);
std::optional<int> regular_degree(const SimpleGraph& g);

// Unitary-group reduction: d = r * |E|; the i-th r-block of A_j is I_r when
// edge i is incident to vertex j, zero otherwise; columns orthonormalized
// (they are orthogonal with norm sqrt(deg j)). Isomorphic graphs map to
// tuples isomorphic up to isometry and subspace relabeling.
template <class T>
SubspaceTuple<T> graph_to_tuple_unitary(const SimpleGraph& g, int r,
                                        const Tolerances& tol = {}) {
  if (g.edges.empty()) throw EmptyGraph("graph_to_tuple_unitary: graph has no edges");
  if (r < 1) throw InvalidInput("graph_to_tuple_unitary: r must be positive");
  const auto deg = degrees(g);
  for (int j = 0; j < g.n; ++j)
    if (deg[j] == 0)
      throw RankDeficient("graph_to_tuple_unitary: vertex " +
                          std::to_string(j + 1) + " is isolated");
  const int e = static_cast<int>(g.edges.size());
  SubspaceTuple<T> t;
  t.d = r * e;
  for (int j = 0; j < g.n; ++j) {
    Mat<T> basis = Mat<T>::Zero(t.d, r);
    for (int i = 0; i < e; ++i)
      if (g.edges[i].first == j || g.edges[i].second == j)
        basis.block(i * r, 0, r, r) = Mat<T>::Identity(r, r);
    t.bases.push_back(orthonormalize<T>(basis, tol));
  }
  return t;
}

// GL-group reduction for an r-regular graph: d = |E|; A_j selects the
// standard basis vectors of the edges incident to j (ascending edge index).
template <class T>
SubspaceTuple<T> graph_to_tuple_gl(const SimpleGraph& g) {
  if (g.edges.empty()) throw EmptyGraph("graph_to_tuple_gl: graph has no edges");
  const auto r = regular_degree(g);
  if (!r) throw NotRegular("graph_to_tuple_gl: graph is not regular");
  const int e = static_cast<int>(g.edges.size());
  SubspaceTuple<T> t;
  t.d = e;
  for (int j = 0; j < g.n; ++j) {
    Mat<T> basis = Mat<T>::Zero(e, *r);
    int c = 0;
    for (int i = 0; i < e; ++i)
      if (g.edges[i].first == j || g.edges[i].second == j) basis(i, c++) = T(1);
    t.bases.push_back(std::move(basis));
  }
  return t;
}

template <class T>
struct Orbit {
  SubspaceTuple<T> tuple;
  Mat<T> transform;  // the applied d x d isometry or invertible matrix
};

// B_i = U A_i (optionally right-scrambled by independent r_i x r_i
// isometries), U = orthonormalized seeded Gaussian.
template <class T>
Orbit<T> apply_isometry(const SubspaceTuple<T>& t, SeededSource& src,
                        bool scramble = false, const Tolerances& tol = {}) {
  Orbit<T> out;
  out.transform = orthonormalize<T>(src.template gaussian_matrix<T>(t.d, t.d), tol);
  out.tuple.d = t.d;
  for (const auto& basis : t.bases) {
    Mat<T> moved = out.transform * basis;
    if (scramble) {
      const int r = static_cast<int>(basis.cols());
      moved = moved * orthonormalize<T>(src.template gaussian_matrix<T>(r, r), tol);
    }
    out.tuple.bases.push_back(std::move(moved));
  }
  return out;
}

// B_i = X A_i G_i with X and the optional G_i invertible seeded Gaussians.
template <class T>
Orbit<T> apply_gl(const SubspaceTuple<T>& t, SeededSource& src,
                  bool scramble = true, const Tolerances& tol = {}) {
  auto invertible = [&](int k) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Mat<T> x = src.template gaussian_matrix<T>(k, k);
      if (rank_tol<T>(x, tol) == k) return x;
    }
    throw Singular("apply_gl: could not draw an invertible matrix");
  };
  Orbit<T> out;
  out.transform = invertible(t.d);
  out.tuple.d = t.d;
  for (const auto& basis : t.bases) {
    Mat<T> moved = out.transform * basis;
    if (scramble) moved = moved * invertible(static_cast<int>(basis.cols()));
    out.tuple.bases.push_back(std::move(moved));
  }
  return out;
}

// The L_epsilon family: lines spanned by e_1+e_2, e_2+e_3, ..., e_d+eps*e_1.
// Frame graph C_d; all 2-products 1/4; lone cycle product eps * 2^(-d).
LineTuple<double> adversarial_line_family(int d, int epsilon);

enum class IsoGroup { isometry, gl };

// Exhaustive search over vertex permutations (lex order, first acceptor
// wins): returns pi with (A_pi(0), ..., A_pi(n-1)) isomorphic to B in fixed
// order, testing via subspaces_unitary_isomorphic or gl_isomorphism_search
// (fixed seed, almost-surely exact). Capped at n <= 8.
template <class T>
std::optional<std::vector<int>> brute_force_permutation_isomorphic(
    const SubspaceTuple<T>& a, const SubspaceTuple<T>& b, IsoGroup group,
    const Tolerances& tol = {}) {
  if (a.n() > 8 || b.n() > 8)
    throw TooLarge("brute_force_permutation_isomorphic: n > 8");
  if (a.n() != b.n()) return std::nullopt;
  const auto ra = a.ranks();
  const auto rb = b.ranks();
  std::vector<int> perm(a.n());
  for (int i = 0; i < a.n(); ++i) perm[i] = i;
  do {
    bool shape_ok = true;
    for (int i = 0; i < a.n() && shape_ok; ++i)
      shape_ok = ra[perm[i]] == rb[i];
    if (!shape_ok) continue;
    SubspaceTuple<T> c;
    c.d = a.d;
    for (int i = 0; i < a.n(); ++i) c.bases.push_back(a.bases[perm[i]]);
    bool ok = false;
    if (group == IsoGroup::isometry) {
      ok = subspaces_unitary_isomorphic(c, b, UnitaryMethod::auto_select, tol)
               .isomorphic;
    } else {
      ok = gl_isomorphism_search(c, b, tol).outcome == GLOutcome::isomorphic;
    }
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace subiso
