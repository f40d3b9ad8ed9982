#pragma once

// Matrix-algebra invariants. A canonical word basis of the algebra generated
// by a tuple (dense mode, or block-sparse mode for cross-Gramian quivers)
// is combined with pair/triple/generator trace tables; two tuples are
// simultaneously unitarily equivalent iff the word lists coincide and every
// table entry matches.

#include "subiso/core.hpp"
#include "subiso/lines.hpp"
#include "subiso/planes.hpp"
#include "subiso/tuple.hpp"

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace subiso {

// Generator indices, leftmost factor first; the empty word is the identity.
using Word = std::vector<int>;

template <class T>
struct BlockElement {
  int row = 0, col = 0;  // block support
  Mat<T> payload;        // ranks[row] x ranks[col]
};

template <class T>
struct WordBasis {
  std::vector<Word> words;
  std::vector<Mat<T>> evaluations;  // k x k in dense mode, payloads in block mode
  std::vector<std::pair<int, int>> supports;  // block mode only
  int passes = 0;
  // Conditioning diagnostics: residuals are relative to the running max
  // evaluation norm at decision time.
  double min_accepted_residual = std::numeric_limits<double>::infinity();
  double max_rejected_residual = 0;
};

namespace detail {

template <class T>
Vec<T> vec_of(const Mat<T>& m) {
  return Eigen::Map<const Vec<T>>(m.data(), m.size());
}

// Two-pass MGS projection against an orthonormal set; v is overwritten by
// its residual and the residual norm returned.
template <class T>
double mgs_residual(const std::vector<Vec<T>>& q, Vec<T>& v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : q) v -= u * u.dot(v);
  return v.norm();
}

template <class T>
bool trace_close_t(const T& a, const T& b, const Tolerances& tol) {
  return std::abs(a - b) <=
         tol.trace_cmp * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

// Canonical word basis of the unital algebra generated by square matrices.
// Starts from the identity word; each pass scans generators (outer, ascending)
// against all words present at the start of the pass (inner, ascending) and
// keeps products whose vectorization is numerically independent. The word
// list depends only on the linear-dependence pattern of the evaluations, so
// simultaneous conjugation leaves it unchanged.
template <class T>
WordBasis<T> algebra_basis_words(const std::vector<Mat<T>>& gens,
                                 const Tolerances& tol = {}) {
  if (gens.empty()) throw InvalidInput("algebra_basis_words: no generators");
  const int k = static_cast<int>(gens[0].rows());
  for (const auto& g : gens)
    if (g.rows() != k || g.cols() != k)
      throw ShapeMismatch("algebra_basis_words: generators must be square, equal size");

  WordBasis<T> wb;
  // Accepted directions kept as contiguous columns; two-pass classical
  // Gram-Schmidt in blocked form (same stability class as two-pass MGS).
  Mat<T> qmat(static_cast<Eigen::Index>(k) * k, 16);
  Eigen::Index qsz = 0;
  double max_norm = 0;
  auto try_add = [&](Word w, Mat<T> eval) {
    Vec<T> v = detail::vec_of(eval);
    max_norm = std::max(max_norm, v.norm());
    if (qsz > 0) {
      const auto qv = qmat.leftCols(qsz);
      for (int pass = 0; pass < 2; ++pass)
        v.noalias() -= qv * (qv.adjoint() * v).eval();
    }
    const double res = v.norm();
    const double rel = res / max_norm;
    if (res > tol.rank_rel * max_norm) {
      if (qsz == qmat.cols())
        qmat.conservativeResize(Eigen::NoChange, 2 * qmat.cols());
      qmat.col(qsz++) = v / res;
      wb.words.push_back(std::move(w));
      wb.evaluations.push_back(std::move(eval));
      wb.min_accepted_residual = std::min(wb.min_accepted_residual, rel);
    } else {
      wb.max_rejected_residual = std::max(wb.max_rejected_residual, rel);
    }
  };
  try_add({}, Mat<T>::Identity(k, k));

  std::size_t m_old = 0;
  while (wb.words.size() != m_old) {
    m_old = wb.words.size();
    ++wb.passes;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < m_old; ++j) {
        Word w;
        w.reserve(wb.words[j].size() + 1);
        w.push_back(static_cast<int>(i));
        w.insert(w.end(), wb.words[j].begin(), wb.words[j].end());
        try_add(std::move(w), gens[i] * wb.evaluations[j]);
      }
  }

  if (static_cast<int>(wb.words.size()) > k * k)
    throw std::logic_error("algebra_basis_words: basis exceeded k^2");
  if (wb.passes > static_cast<int>(wb.words.size()))
    throw std::logic_error("algebra_basis_words: pass bound violated");
  // Post-hoc safety: the accepted evaluations must be jointly full rank.
  Mat<T> all(k * k, static_cast<Eigen::Index>(wb.words.size()));
  for (std::size_t c = 0; c < wb.words.size(); ++c)
    all.col(c) = detail::vec_of(wb.evaluations[c]);
  if (rank_tol<T>(all, tol) != static_cast<int>(wb.words.size()))
    throw std::logic_error("algebra_basis_words: independence recheck failed");
  return wb;
}

// Block-sparse variant for quiver generators: every word evaluates inside a
// single (row, col) block, products compose only when the inner supports
// match, and independence is tested per block. Initialized with all length-1
// words in generator-list order (callers supply lex (row, col) order).
template <class T>
WordBasis<T> block_algebra_basis_words(const std::vector<BlockElement<T>>& gens,
                                       const std::vector<int>& ranks,
                                       const Tolerances& tol = {}) {
  if (gens.empty()) throw InvalidInput("block_algebra_basis_words: no generators");
  const int nb = static_cast<int>(ranks.size());
  for (const auto& g : gens) {
    if (g.row < 0 || g.row >= nb || g.col < 0 || g.col >= nb)
      throw ShapeMismatch("block_algebra_basis_words: block support out of range");
    if (g.payload.rows() != ranks[g.row] || g.payload.cols() != ranks[g.col])
      throw ShapeMismatch("block_algebra_basis_words: payload shape mismatch");
  }

  WordBasis<T> wb;
  std::map<std::pair<int, int>, std::vector<Vec<T>>> q;
  std::map<std::pair<int, int>, double> block_max;
  auto try_add = [&](Word w, std::pair<int, int> sup, Mat<T> eval) {
    Vec<T> v = detail::vec_of(eval);
    double& mx = block_max[sup];
    mx = std::max(mx, v.norm());
    auto& qs = q[sup];
    const double res = detail::mgs_residual(qs, v);
    const double rel = res / mx;
    if (res > tol.rank_rel * mx) {
      qs.push_back(v / res);
      wb.words.push_back(std::move(w));
      wb.supports.push_back(sup);
      wb.evaluations.push_back(std::move(eval));
      wb.min_accepted_residual = std::min(wb.min_accepted_residual, rel);
    } else {
      wb.max_rejected_residual = std::max(wb.max_rejected_residual, rel);
    }
  };
  for (std::size_t i = 0; i < gens.size(); ++i)
    try_add({static_cast<int>(i)}, {gens[i].row, gens[i].col}, gens[i].payload);
  const std::size_t m_init = wb.words.size();

  std::size_t m_old = 0;
  while (wb.words.size() != m_old) {
    m_old = wb.words.size();
    ++wb.passes;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < m_old; ++j) {
        if (gens[i].col != wb.supports[j].first) continue;  // structural zero
        Word w;
        w.reserve(wb.words[j].size() + 1);
        w.push_back(static_cast<int>(i));
        w.insert(w.end(), wb.words[j].begin(), wb.words[j].end());
        try_add(std::move(w), {gens[i].row, wb.supports[j].second},
                gens[i].payload * wb.evaluations[j]);
      }
  }

  for (const auto& [sup, qs] : q)
    if (static_cast<int>(qs.size()) > ranks[sup.first] * ranks[sup.second])
      throw std::logic_error("block_algebra_basis_words: block basis exceeded r^2");
  if (wb.passes > static_cast<int>(wb.words.size() - m_init) + 1)
    throw std::logic_error("block_algebra_basis_words: pass bound violated");
  // Per-block full-rank recheck.
  for (const auto& [sup, qs] : q) {
    Mat<T> all(ranks[sup.first] * ranks[sup.second],
               static_cast<Eigen::Index>(qs.size()));
    Eigen::Index c = 0;
    for (std::size_t w = 0; w < wb.words.size(); ++w)
      if (wb.supports[w] == sup) all.col(c++) = detail::vec_of(wb.evaluations[w]);
    if (rank_tol<T>(all, tol) != static_cast<int>(qs.size()))
      throw std::logic_error("block_algebra_basis_words: independence recheck failed");
  }
  return wb;
}

// Invariant payload: word list plus trace tables. Two tuples are compared by
// exact word-list equality and tolerance comparison of every trace.
template <class T>
struct TraceInvariant {
  std::string method;  // "dense" | "projection" | "quiver"
  int k = 0;           // the algebra acts on k x k matrices
  std::vector<std::pair<int, int>> generator_supports;  // block modes only
  std::vector<Word> words;
  std::vector<std::pair<int, int>> word_supports;  // block modes only
  Mat<T> pair_traces;                              // tr(E_i^* E_j), m x m
  Mat<T> generator_traces;                         // tr(E_i^* A_j), m x g
  // tr(E_i^* E_j E_k), ascending (i,j,k), entries with |t| > 1e-14.
  std::vector<std::tuple<int, int, int, T>> triple_traces;
};

namespace detail {

inline constexpr double kTripleKeep = 1e-14;

template <class T>
T trace_prod2(const Mat<T>& x, const Mat<T>& y) {  // tr(x*y), index-ascending
  T s{};
  for (Eigen::Index p = 0; p < x.rows(); ++p)
    for (Eigen::Index q = 0; q < x.cols(); ++q) s += x(p, q) * y(q, p);
  return s;
}

template <class T>
T trace_adj2(const Mat<T>& x, const Mat<T>& y) {  // tr(x^* y)
  T s{};
  for (Eigen::Index p = 0; p < x.rows(); ++p)
    for (Eigen::Index q = 0; q < x.cols(); ++q)
      s += scalar_traits<T>::conj(x(p, q)) * y(p, q);
  return s;
}

}  // namespace detail

// Trace tables evaluated on materialized word evaluations (any generator
// tuple). Cubic in m but fine at desk scale; also the oracle the factorized
// projection path is tested against.
template <class T>
TraceInvariant<T> dense_trace_tables(const std::vector<Mat<T>>& gens,
                                     const WordBasis<T>& wb) {
  TraceInvariant<T> inv;
  inv.method = "dense";
  inv.k = static_cast<int>(gens[0].rows());
  inv.words = wb.words;
  const int m = static_cast<int>(wb.words.size());
  const int g = static_cast<int>(gens.size());
  inv.pair_traces.resize(m, m);
  inv.generator_traces.resize(m, g);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      inv.pair_traces(i, j) =
          detail::trace_adj2(wb.evaluations[i], wb.evaluations[j]);
    for (int j = 0; j < g; ++j)
      inv.generator_traces(i, j) = detail::trace_adj2(wb.evaluations[i], gens[j]);
  }
  Mat<T> x;
  for (int i = 0; i < m; ++i) {
    const Mat<T> ei_adj = wb.evaluations[i].adjoint();
    for (int j = 0; j < m; ++j) {
      x.noalias() = ei_adj * wb.evaluations[j];
      for (int l = 0; l < m; ++l) {
        const T t = detail::trace_prod2(x, wb.evaluations[l]);
        if (std::abs(t) > detail::kTripleKeep)
          inv.triple_traces.emplace_back(i, j, l, t);
      }
    }
  }
  return inv;
}

// Factorized trace tables for projection generators P_i = Q_i Q_i^*: every
// word evaluation is the thin product Q_c1 * G_w^* with
// G_w = P_cL ... P_c2 Q_c1, so each trace reduces to a cyclic product of
// small cross matrices. d x d word products are never formed here.
template <class T>
TraceInvariant<T> projection_trace_tables(const std::vector<Mat<T>>& q_bases,
                                          const WordBasis<T>& wb) {
  const int n = static_cast<int>(q_bases.size());
  const int m = static_cast<int>(wb.words.size());
  const int d = static_cast<int>(q_bases[0].rows());

  // Pool of thin factors: Q_0..Q_{n-1}, then one propagated G per word.
  std::vector<Mat<T>> pool(q_bases.begin(), q_bases.end());
  pool.resize(n + m);
  struct Slot {
    int p = -1, s = -1;  // value = pool[p] * pool[s]^*; p < 0 means identity
  };
  std::vector<Slot> slots(m);
  for (int a = 0; a < m; ++a) {
    const Word& w = wb.words[a];
    if (w.empty()) continue;  // identity word
    Mat<T> g = q_bases[w[0]];
    for (std::size_t t = 1; t < w.size(); ++t)
      g = q_bases[w[t]] * (q_bases[w[t]].adjoint() * g).eval();
    pool[n + a] = std::move(g);
    slots[a] = {w[0], n + a};
  }

  // Cross table over the pool; entries are r x r.
  std::vector<std::vector<Mat<T>>> cross(pool.size());
  for (std::size_t p = 0; p < pool.size(); ++p) {
    cross[p].resize(pool.size());
    if (pool[p].size() == 0) continue;
    for (std::size_t q = 0; q < pool.size(); ++q) {
      if (pool[q].size() == 0) continue;
      cross[p][q].noalias() = pool[p].adjoint() * pool[q];
    }
  }

  // slot product value = pool[p] pool[s]^*; adjoint swaps the roles.
  auto adj = [](Slot sl) { return sl.p < 0 ? sl : Slot{sl.s, sl.p}; };
  auto trace_of = [&](Slot s1, Slot s2, Slot s3, Mat<T>& tmp) -> T {
    Slot act[3];
    int na = 0;
    for (Slot sl : {s1, s2, s3})
      if (sl.p >= 0) act[na++] = sl;
    if (na == 0) return T(static_cast<double>(d));
    if (na == 1) {
      const Mat<T>& x = cross[act[0].s][act[0].p];
      T s{};
      for (Eigen::Index i = 0; i < x.rows(); ++i) s += x(i, i);
      return s;
    }
    if (na == 2)
      return detail::trace_prod2(cross[act[0].s][act[1].p],
                                 cross[act[1].s][act[0].p]);
    tmp.noalias() = cross[act[0].s][act[1].p] * cross[act[1].s][act[2].p];
    return detail::trace_prod2(tmp, cross[act[2].s][act[0].p]);
  };

  TraceInvariant<T> inv;
  inv.method = "projection";
  inv.k = d;
  inv.words = wb.words;
  inv.pair_traces.resize(m, m);
  inv.generator_traces.resize(m, n);
  const Slot none;
  Mat<T> tmp;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      inv.pair_traces(i, j) = trace_of(adj(slots[i]), slots[j], none, tmp);
    for (int j = 0; j < n; ++j)
      inv.generator_traces(i, j) = trace_of(adj(slots[i]), Slot{j, j}, none, tmp);
  }
  // Triple table, batched: tr(E_i^* E_j E_l) unrolls over the cross table to
  // tr(cross[p_i][p_j] cross[s_j][p_l] cross[s_l][s_i]). Stacking the
  // l-dependent factors side by side turns the inner loop into one GEMM per
  // (i, j) plus a segmented coefficient-wise reduction, instead of m tiny
  // products. Triples touching the identity word stay on the scalar path.
  std::vector<int> live;
  for (int l = 0; l < m; ++l)
    if (slots[l].p >= 0) live.push_back(l);
  std::vector<int> offset(m, 0), width(m, 0);
  int total = 0;
  for (int l : live) {
    offset[l] = total;
    width[l] = static_cast<int>(pool[slots[l].p].cols());
    total += width[l];
  }
  std::vector<Mat<T>> b_stack(m), c_stack(m);
  for (int j : live) {
    const int rj = static_cast<int>(pool[slots[j].p].cols());
    b_stack[j].resize(rj, total);
    c_stack[j].resize(rj, total);
    for (int l : live) {
      b_stack[j].middleCols(offset[l], width[l]) =
          cross[slots[j].s][slots[l].p];
      c_stack[j].middleCols(offset[l], width[l]) =
          cross[slots[l].s][slots[j].s].transpose();
    }
  }
  inv.triple_traces.reserve(static_cast<std::size_t>(m) * m * m);
  Mat<T> prod, had;
  for (int i = 0; i < m; ++i) {
    const bool live_i = slots[i].p >= 0;
    const int ri = live_i ? static_cast<int>(pool[slots[i].p].cols()) : 0;
    if (live_i) {
      prod.resize(ri, total);
      had.resize(ri, total);
    }
    for (int j = 0; j < m; ++j) {
      const bool batched = live_i && slots[j].p >= 0;
      if (batched && total > 0) {
        prod.noalias() = cross[slots[i].p][slots[j].p] * b_stack[j];
        had = prod.cwiseProduct(c_stack[i]);
      }
      for (int l = 0; l < m; ++l) {
        T t;
        if (batched && slots[l].p >= 0) {
          // had is column-major, so the l-th column block is contiguous.
          const T* seg = had.data() + static_cast<std::size_t>(offset[l]) * ri;
          const int cnt = width[l] * ri;
          t = T{};
          for (int q = 0; q < cnt; ++q) t += seg[q];
        } else {
          t = trace_of(adj(slots[i]), slots[j], slots[l], tmp);
        }
        if (std::abs(t) > detail::kTripleKeep)
          inv.triple_traces.emplace_back(i, j, l, t);
      }
    }
  }
  return inv;
}

// Trace tables in block mode: traces are structurally zero unless the block
// supports chain, so only the chaining patterns are visited.
template <class T>
TraceInvariant<T> block_trace_tables(const std::vector<BlockElement<T>>& gens,
                                     const WordBasis<T>& wb,
                                     const std::vector<int>& ranks) {
  TraceInvariant<T> inv;
  inv.method = "quiver";
  inv.k = 0;
  for (int r : ranks) inv.k += r;
  for (const auto& g : gens) inv.generator_supports.emplace_back(g.row, g.col);
  inv.words = wb.words;
  inv.word_supports = wb.supports;

  const int m = static_cast<int>(wb.words.size());
  const int g = static_cast<int>(gens.size());
  inv.pair_traces.setZero(m, m);
  inv.generator_traces.setZero(m, g);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      if (wb.supports[i] == wb.supports[j])
        inv.pair_traces(i, j) =
            detail::trace_adj2(wb.evaluations[i], wb.evaluations[j]);
    for (int j = 0; j < g; ++j)
      if (wb.supports[i] == std::make_pair(gens[j].row, gens[j].col))
        inv.generator_traces(i, j) =
            detail::trace_adj2(wb.evaluations[i], gens[j].payload);
  }

  // tr(E_a^* E_b E_c) needs supports (j,i), (j,k), (k,i).
  Mat<T> x;
  for (int a = 0; a < m; ++a) {
    const auto [ja, ia] = wb.supports[a];
    const Mat<T> ea_adj = wb.evaluations[a].adjoint();
    for (int b = 0; b < m; ++b) {
      if (wb.supports[b].first != ja) continue;
      x.noalias() = ea_adj * wb.evaluations[b];
      for (int c = 0; c < m; ++c) {
        if (wb.supports[c].first != wb.supports[b].second ||
            wb.supports[c].second != ia)
          continue;
        const T t = detail::trace_prod2(x, wb.evaluations[c]);
        if (std::abs(t) > detail::kTripleKeep)
          inv.triple_traces.emplace_back(a, b, c, t);
      }
    }
  }
  return inv;
}

// First difference between two invariants, or nullopt when they agree.
// Word lists and block supports compare exactly; traces with relative
// tolerance trace_cmp.
template <class T>
std::optional<std::string> invariant_mismatch(const TraceInvariant<T>& a,
                                              const TraceInvariant<T>& b,
                                              const Tolerances& tol = {}) {
  if (a.method != b.method) return "methods differ";
  if (a.k != b.k) return "algebra sizes differ";
  if (a.generator_supports != b.generator_supports)
    return "generator block supports differ";
  if (a.words.size() != b.words.size())
    return "word counts differ (" + std::to_string(a.words.size()) + " vs " +
           std::to_string(b.words.size()) + ")";
  for (std::size_t i = 0; i < a.words.size(); ++i)
    if (a.words[i] != b.words[i])
      return "word lists differ at index " + std::to_string(i);
  if (a.word_supports != b.word_supports) return "word supports differ";
  for (Eigen::Index i = 0; i < a.pair_traces.rows(); ++i)
    for (Eigen::Index j = 0; j < a.pair_traces.cols(); ++j)
      if (!detail::trace_close_t(a.pair_traces(i, j), b.pair_traces(i, j), tol))
        return "pair trace (" + std::to_string(i) + "," + std::to_string(j) +
               ") differs";
  for (Eigen::Index i = 0; i < a.generator_traces.rows(); ++i)
    for (Eigen::Index j = 0; j < a.generator_traces.cols(); ++j)
      if (!detail::trace_close_t(a.generator_traces(i, j),
                                 b.generator_traces(i, j), tol))
        return "generator trace (" + std::to_string(i) + "," +
               std::to_string(j) + ") differs";
  // Merge walk over the sparse triples; a missing entry counts as zero.
  std::size_t ia = 0, ib = 0;
  auto key = [](const std::tuple<int, int, int, T>& e) {
    return std::make_tuple(std::get<0>(e), std::get<1>(e), std::get<2>(e));
  };
  auto fail = [](const std::tuple<int, int, int, T>& e) {
    return "triple trace (" + std::to_string(std::get<0>(e)) + "," +
           std::to_string(std::get<1>(e)) + "," +
           std::to_string(std::get<2>(e)) + ") differs";
  };
  while (ia < a.triple_traces.size() || ib < b.triple_traces.size()) {
    if (ib == b.triple_traces.size() ||
        (ia < a.triple_traces.size() &&
         key(a.triple_traces[ia]) < key(b.triple_traces[ib]))) {
      if (!detail::trace_close_t(std::get<3>(a.triple_traces[ia]), T{}, tol))
        return fail(a.triple_traces[ia]);
      ++ia;
    } else if (ia == a.triple_traces.size() ||
               key(b.triple_traces[ib]) < key(a.triple_traces[ia])) {
      if (!detail::trace_close_t(std::get<3>(b.triple_traces[ib]), T{}, tol))
        return fail(b.triple_traces[ib]);
      ++ib;
    } else {
      if (!detail::trace_close_t(std::get<3>(a.triple_traces[ia]),
                                 std::get<3>(b.triple_traces[ib]), tol))
        return fail(a.triple_traces[ia]);
      ++ia;
      ++ib;
    }
  }
  return std::nullopt;
}

// Simultaneous unitary equivalence of two star-closed matrix tuples:
// U a_i U^* = b_i for some unitary U iff the word bases coincide and the
// pair/triple/generator trace tables match. star_perm names the adjoint
// permutation (a_i^* = a_{star_perm[i]}); it is verified on both tuples.
template <class T>
DecisionReport unitary_tuple_equivalent(const std::vector<Mat<T>>& a,
                                        const std::vector<Mat<T>>& b,
                                        const std::vector<int>& star_perm,
                                        const Tolerances& tol = {}) {
  DecisionReport rep;
  rep.method = "dense-algebra";
  if (a.empty() || a.size() != b.size())
    throw ShapeMismatch("unitary_tuple_equivalent: tuple sizes differ");
  if (star_perm.size() != a.size())
    throw ShapeMismatch("unitary_tuple_equivalent: star_perm size");
  if (a[0].rows() != b[0].rows()) {
    rep.detail = "matrix sizes differ";
    return rep;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int pi = star_perm[i];
    if (pi < 0 || pi >= static_cast<int>(a.size()))
      throw InvalidInput("unitary_tuple_equivalent: star_perm out of range");
    if ((a[i].adjoint() - a[pi]).norm() > 1e-10 ||
        (b[i].adjoint() - b[pi]).norm() > 1e-10)
      throw StarClosureViolated(
          "unitary_tuple_equivalent: tuple is not closed under adjoints via "
          "star_perm (index " + std::to_string(i) + ")");
  }
  const WordBasis<T> wa = algebra_basis_words(a, tol);
  const WordBasis<T> wb = algebra_basis_words(b, tol);
  TraceInvariant<T> ta = dense_trace_tables(a, wa);
  TraceInvariant<T> tb = dense_trace_tables(b, wb);
  if (auto bad = invariant_mismatch(ta, tb, tol)) {
    rep.detail = *bad;
    return rep;
  }
  rep.isomorphic = true;
  rep.detail = "word bases and trace tables match";
  return rep;
}

// Unitary-isomorphism invariant from the tuple's orthogonal projections.
template <class T>
TraceInvariant<T> projection_invariant(const SubspaceTuple<T>& t,
                                       const Tolerances& tol = {}) {
  validate_tuple(t, tol);
  std::vector<Mat<T>> q;
  std::vector<Mat<T>> projections;
  for (const auto& basis : t.bases) {
    q.push_back(orthonormalize<T>(basis, tol));
    projections.push_back(q.back() * q.back().adjoint());
  }
  const WordBasis<T> wb = algebra_basis_words(projections, tol);
  return projection_trace_tables(q, wb);
}

// Cross-Gramian blocks of the orthonormalized bases, lex (row, col) order.
// Diagonal blocks are always included; off-diagonal blocks only when their
// Frobenius norm exceeds the orth tolerance (structural zeros otherwise).
template <class T>
struct BlockGramianElements {
  std::vector<int> ranks;
  std::vector<BlockElement<T>> elements;
};

template <class T>
BlockGramianElements<T> cross_gramian_blocks(const SubspaceTuple<T>& t,
                                             const Tolerances& tol = {}) {
  validate_tuple(t, tol);
  std::vector<Mat<T>> q;
  for (const auto& basis : t.bases) q.push_back(orthonormalize<T>(basis, tol));
  BlockGramianElements<T> out;
  out.ranks = t.ranks();
  for (int i = 0; i < t.n(); ++i)
    for (int j = 0; j < t.n(); ++j) {
      Mat<T> block = q[i].adjoint() * q[j];
      if (i == j || block.norm() > tol.orth)
        out.elements.push_back({i, j, std::move(block)});
    }
  return out;
}

// Quiver invariant: block-sparse word basis over the cross-Gramian elements
// plus block trace tables. Depends only on the Gramian, hence embedding-free.
template <class T>
TraceInvariant<T> quiver_invariant(const SubspaceTuple<T>& t,
                                   const Tolerances& tol = {}) {
  BlockGramianElements<T> bg = cross_gramian_blocks(t, tol);
  for (const auto& e : bg.elements) {
    if (e.row == e.col &&
        (e.payload - Mat<T>::Identity(e.payload.rows(), e.payload.cols()))
                .cwiseAbs()
                .maxCoeff() > 1e-8)
      throw InvalidGramian("quiver_invariant: diagonal block is not the identity");
  }
  // Star closure (A_ij^* = A_ji) holds for any Gramian; verify defensively.
  for (const auto& e : bg.elements)
    for (const auto& f : bg.elements)
      if (e.row == f.col && e.col == f.row &&
          (e.payload.adjoint() - f.payload).norm() > 1e-10)
        throw StarClosureViolated("quiver_invariant: Gramian symmetry violated");
  const WordBasis<T> wb = block_algebra_basis_words(bg.elements, bg.ranks, tol);
  return block_trace_tables(bg.elements, wb, bg.ranks);
}

enum class UnitaryMethod { auto_select, lines, planes, projection, quiver };

// Fixed-order unitary isomorphism of subspace tuples. auto_select picks
// lines (all ranks 1), planes (real, all ranks 2, nowhere orthogonal), and
// the quiver invariant otherwise. The projection method compares tuples of
// different ambient dimensions after zero-padding to a common dimension;
// lines/planes/quiver are Gramian-determined and ignore the ambient
// dimension altogether.
template <class T>
DecisionReport subspaces_unitary_isomorphic(const SubspaceTuple<T>& a,
                                            const SubspaceTuple<T>& b,
                                            UnitaryMethod method = UnitaryMethod::auto_select,
                                            const Tolerances& tol = {}) {
  DecisionReport rep;
  if (a.n() != b.n()) {
    rep.method = "shape";
    rep.detail = "subspace counts differ";
    return rep;
  }
  if (a.ranks() != b.ranks()) {
    rep.method = "shape";
    rep.detail = "rank profiles differ";
    return rep;
  }

  const auto ranks = a.ranks();
  const bool all1 = std::all_of(ranks.begin(), ranks.end(), [](int r) { return r == 1; });
  const bool all2 = std::all_of(ranks.begin(), ranks.end(), [](int r) { return r == 2; });

  if (method == UnitaryMethod::auto_select) {
    if (all1) {
      method = UnitaryMethod::lines;
    } else if (all2 && scalar_traits<T>::field == Field::real) {
      method = UnitaryMethod::quiver;  // upgraded to planes below when applicable
      if constexpr (scalar_traits<T>::field == Field::real) {
        const SubspaceTuple<double>& ra = a;
        const SubspaceTuple<double>& rb = b;
        if (check_nowhere_orthogonal(plane_gramian_from_bases(ra, tol), tol) &&
            check_nowhere_orthogonal(plane_gramian_from_bases(rb, tol), tol))
          method = UnitaryMethod::planes;
      }
    } else {
      method = UnitaryMethod::quiver;
    }
  }

  switch (method) {
    case UnitaryMethod::lines: {
      if (!all1)
        throw InapplicableMethod("lines method requires all ranks equal to 1");
      return lines_isomorphic(line_tuple_from_subspaces(a, tol),
                              line_tuple_from_subspaces(b, tol), tol);
    }
    case UnitaryMethod::planes: {
      if constexpr (scalar_traits<T>::field == Field::real) {
        if (!all2)
          throw InapplicableMethod("planes method requires all ranks equal to 2");
        return planes_isomorphic(a, b, tol);
      } else {
        throw InapplicableMethod("planes method requires the real field");
      }
    }
    case UnitaryMethod::projection: {
      rep.method = "projection";
      SubspaceTuple<T> ea = a, eb = b;
      const int d = std::max(a.d, b.d);
      auto embed = [d](SubspaceTuple<T>& t) {
        for (auto& basis : t.bases) {
          Mat<T> padded = Mat<T>::Zero(d, basis.cols());
          padded.topRows(basis.rows()) = basis;
          basis = std::move(padded);
        }
        t.d = d;
      };
      embed(ea);
      embed(eb);
      const TraceInvariant<T> ia = projection_invariant(ea, tol);
      const TraceInvariant<T> ib = projection_invariant(eb, tol);
      if (auto bad = invariant_mismatch(ia, ib, tol)) {
        rep.detail = *bad;
        return rep;
      }
      rep.isomorphic = true;
      rep.detail = "projection-algebra invariants match";
      return rep;
    }
    case UnitaryMethod::quiver: {
      rep.method = "quiver";
      const TraceInvariant<T> ia = quiver_invariant(a, tol);
      const TraceInvariant<T> ib = quiver_invariant(b, tol);
      if (auto bad = invariant_mismatch(ia, ib, tol)) {
        rep.detail = *bad;
        return rep;
      }
      rep.isomorphic = true;
      rep.detail = "quiver invariants match";
      return rep;
    }
    case UnitaryMethod::auto_select:
      break;
  }
  throw InvalidInput("subspaces_unitary_isomorphic: unknown method");
}

}  // namespace subiso
