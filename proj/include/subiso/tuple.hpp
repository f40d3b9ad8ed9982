#pragma once

// Subspace tuples: a common ambient dimension d plus one full-column-rank
// d x r_i basis per subspace. Bases are representatives, not canonical: two
// tuples are compared through the invariants, never entrywise.

#include "subiso/core.hpp"
#include "subiso/rng.hpp"

#include <vector>

namespace subiso {

template <class T>
struct SubspaceTuple {
  int d = 0;
  std::vector<Mat<T>> bases;

  int n() const { return static_cast<int>(bases.size()); }
  std::vector<int> ranks() const {
    std::vector<int> r;
    r.reserve(bases.size());
    for (const auto& b : bases) r.push_back(static_cast<int>(b.cols()));
    return r;
  }
};

template <class T>
void validate_tuple(const SubspaceTuple<T>& t, const Tolerances& tol = {}) {
  if (t.d <= 0) throw InvalidInput("tuple: ambient dimension must be positive");
  if (t.bases.empty()) throw InvalidInput("tuple: needs at least one subspace");
  for (std::size_t i = 0; i < t.bases.size(); ++i) {
    const auto& b = t.bases[i];
    if (b.rows() != t.d)
      throw ShapeMismatch("tuple: basis " + std::to_string(i) + " has wrong row count");
    if (b.cols() < 1 || b.cols() > t.d)
      throw ShapeMismatch("tuple: basis " + std::to_string(i) + " has invalid rank");
    if (rank_tol<T>(b, tol) != b.cols())
      throw RankDeficient("tuple: basis " + std::to_string(i) + " is rank deficient");
  }
}

// Same d and same rank sequence; the precondition for fixed-order comparison.
template <class T>
bool same_shape(const SubspaceTuple<T>& a, const SubspaceTuple<T>& b) {
  return a.d == b.d && a.ranks() == b.ranks();
}

// i.i.d. Gaussian bases, orthonormalized. Almost surely full rank; the
// orthonormalize call turns a freak near-degenerate draw into a hard error
// instead of a silent bad tuple.
template <class T>
SubspaceTuple<T> random_tuple(int d, const std::vector<int>& ranks,
                              SeededSource& src, const Tolerances& tol = {}) {
  if (d <= 0) throw InvalidInput("random_tuple: d must be positive");
  SubspaceTuple<T> t;
  t.d = d;
  for (int r : ranks) {
    if (r < 1 || r > d) throw InvalidInput("random_tuple: rank out of range");
    t.bases.push_back(orthonormalize<T>(src.gaussian_matrix<T>(d, r), tol));
  }
  return t;
}

// Outcome of a fixed-order decision plus a short human-readable diagnostic
// naming the method and, on rejection, the first failing comparison.
struct DecisionReport {
  bool isomorphic = false;
  std::string method;
  std::string detail;
};

}  // namespace subiso
