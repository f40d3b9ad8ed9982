#pragma once

// GL(d) isomorphism of subspace tuples via the joint intertwining system
// X A_i = B_i Y_i, plus the stabilizer-dimension diagnostic and the n*
// experiment locating the onset of trivial stabilizers for random tuples.

#include "subiso/core.hpp"
#include "subiso/rng.hpp"
#include "subiso/tuple.hpp"

#include <cstdint>
#include <vector>

namespace subiso {

template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Coefficient matrix of {X A_i = B_i Y_i : i}, unknowns ordered
// [vec(X) | vec(Y_1) | ... | vec(Y_n)] with column-major vec. Block row i is
// (A_i^T kron I_d | ... -I_{r_i} kron B_i ...). The stabilizer system of a
// single tuple is stabilizer_system(t, t).
template <class T>
Mat<T> stabilizer_system(const SubspaceTuple<T>& a, const SubspaceTuple<T>& b) {
  if (a.d != b.d || a.ranks() != b.ranks())
    throw ShapeMismatch("stabilizer_system: tuples must share d and ranks");
  const int d = a.d;
  const auto ranks = a.ranks();
  Eigen::Index rows = 0, ycols = 0;
  for (int r : ranks) {
    rows += static_cast<Eigen::Index>(d) * r;
    ycols += static_cast<Eigen::Index>(r) * r;
  }
  Mat<T> m = Mat<T>::Zero(rows, d * d + ycols);
  const Mat<T> id = Mat<T>::Identity(d, d);
  Eigen::Index row0 = 0, ycol0 = d * d;
  for (std::size_t i = 0; i < a.bases.size(); ++i) {
    const int r = ranks[i];
    m.block(row0, 0, d * r, d * d) = kron<T>(a.bases[i].transpose(), id);
    m.block(row0, ycol0, d * r, r * r) =
        -kron<T>(Mat<T>::Identity(r, r), b.bases[i]);
    row0 += static_cast<Eigen::Index>(d) * r;
    ycol0 += static_cast<Eigen::Index>(r) * r;
  }
  return m;
}

struct StabilizerReport {
  int dimension = 0;            // nullity of the joint stabilizer system
  bool trivially_stabilized = false;  // dimension == 1 (scalars only)
  double smallest_kept_sv = 0;        // smallest singular value counted as nonzero
  double largest_discarded_sv = 0;    // largest singular value treated as zero
  double spectral_gap = std::numeric_limits<double>::infinity();
  bool ambiguous = false;  // spectral_gap < 1e3: rank decision is fragile
};

namespace detail {

inline void fill_gap(StabilizerReport& rep, const Eigen::VectorXd& sv, int rank) {
  rep.smallest_kept_sv = rank > 0 ? sv(rank - 1) : 0;
  rep.largest_discarded_sv = rank < sv.size() ? sv(rank) : 0;
  rep.spectral_gap = rep.largest_discarded_sv > 0
                         ? rep.smallest_kept_sv / rep.largest_discarded_sv
                         : std::numeric_limits<double>::infinity();
  rep.ambiguous = rep.spectral_gap < 1e3;
}

}  // namespace detail

template <class T>
StabilizerReport stabilizer_dimension(const SubspaceTuple<T>& t,
                                      const Tolerances& tol = {}) {
  validate_tuple(t, tol);
  const Mat<T> m = stabilizer_system(t, t);
  Eigen::JacobiSVD<Mat<T>> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank_rel * sv(0)) ++rank;
  StabilizerReport rep;
  rep.dimension = static_cast<int>(m.cols()) - rank;
  rep.trivially_stabilized = rep.dimension == 1;
  detail::fill_gap(rep, sv, rank);
  return rep;
}

enum class GLOutcome { isomorphic, not_isomorphic, precondition_failed };

template <class T>
struct GLCertificate {
  GLOutcome outcome = GLOutcome::precondition_failed;
  std::string detail;
  Mat<T> x;               // witness, ||X||_F = sqrt(d), leading entry positive
  std::vector<Mat<T>> y;  // X A_i = B_i Y_i
  double max_residual_angle = 0;  // largest principal angle over all i
  StabilizerReport stab_a, stab_b;
};

namespace detail {

// Normalizes a solution vector in place: scale so ||X||_F = sqrt(d) and the
// first X entry (column-major) above half the max magnitude is positive real.
template <class T>
void normalize_witness(Vec<T>& v, int d) {
  const double xnorm = v.head(d * d).norm();
  if (xnorm == 0) return;
  v *= std::sqrt(static_cast<double>(d)) / xnorm;
  const double mx = v.head(d * d).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d) * d; ++i)
    if (std::abs(v(i)) >= 0.5 * mx) {
      v *= scalar_traits<T>::conj(v(i)) / std::abs(v(i));
      break;
    }
}

// Assembles the certificate from a candidate solution vector; returns false
// when X is not invertible.
template <class T>
bool certify_solution(const Vec<T>& v, const SubspaceTuple<T>& a,
                      const SubspaceTuple<T>& b, const Tolerances& tol,
                      GLCertificate<T>& cert) {
  const int d = a.d;
  Mat<T> x = Eigen::Map<const Mat<T>>(v.data(), d, d);
  Eigen::JacobiSVD<Mat<T>> svd(x);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol.rank_rel * sv(0)) return false;
  cert.x = std::move(x);
  cert.y.clear();
  cert.max_residual_angle = 0;
  Eigen::Index off = static_cast<Eigen::Index>(d) * d;
  for (std::size_t i = 0; i < a.bases.size(); ++i) {
    const int r = static_cast<int>(a.bases[i].cols());
    cert.y.push_back(Eigen::Map<const Mat<T>>(v.data() + off, r, r));
    off += static_cast<Eigen::Index>(r) * r;
    const double ang =
        max_principal_angle<T>(cert.x * a.bases[i], b.bases[i], tol);
    cert.max_residual_angle = std::max(cert.max_residual_angle, ang);
  }
  return true;
}

}  // namespace detail

// Randomized GL decision: sound in both directions with probability one.
// The nullspace of the intertwining system contains an invertible X iff the
// tuples are GL-isomorphic; a seeded random combination of null vectors is
// invertible almost surely whenever one exists. A found witness is certified
// by principal angles (< 1e-8 required). No stabilizer precondition.
template <class T>
GLCertificate<T> gl_isomorphism_search(const SubspaceTuple<T>& a,
                                       const SubspaceTuple<T>& b,
                                       const Tolerances& tol = {},
                                       std::uint64_t seed = 0xA5) {
  validate_tuple(a, tol);
  validate_tuple(b, tol);
  GLCertificate<T> cert;
  if (a.d != b.d || a.ranks() != b.ranks()) {
    cert.outcome = GLOutcome::not_isomorphic;
    cert.detail = "shapes differ";
    return cert;
  }
  const Mat<T> m = stabilizer_system(a, b);
  const Mat<T> null = nullspace<T>(m, tol);
  if (null.cols() == 0) {
    cert.outcome = GLOutcome::not_isomorphic;
    cert.detail = "no nonzero intertwiner";
    return cert;
  }
  SeededSource src(seed);
  for (int trial = 0; trial < 3; ++trial) {
    Vec<T> v;
    if (null.cols() == 1 && trial == 0) {
      v = null.col(0);
    } else {
      const Mat<T> coeff = src.template gaussian_matrix<T>(
          static_cast<int>(null.cols()), 1);
      v = null * coeff;
    }
    detail::normalize_witness(v, a.d);
    if (!detail::certify_solution(v, a, b, tol, cert)) continue;
    if (cert.max_residual_angle < 1e-8) {
      cert.outcome = GLOutcome::isomorphic;
      cert.detail = "invertible intertwiner found";
    } else {
      cert.outcome = GLOutcome::precondition_failed;
      cert.detail = "witness failed the residual-angle certificate";
    }
    return cert;
  }
  cert.outcome = GLOutcome::not_isomorphic;
  cert.detail = "no invertible intertwiner in the solution space";
  return cert;
}

// Certified GL decision for trivially stabilized tuples only; refuses
// (precondition_failed) when either stabilizer is nontrivial or its rank
// decision is ambiguous. Under the precondition the solution space is at
// most one-dimensional, so the decision is deterministic.
template <class T>
GLCertificate<T> gl_isomorphism(const SubspaceTuple<T>& a,
                                const SubspaceTuple<T>& b,
                                const Tolerances& tol = {}) {
  GLCertificate<T> cert;
  cert.stab_a = stabilizer_dimension(a, tol);
  cert.stab_b = stabilizer_dimension(b, tol);
  if (cert.stab_a.ambiguous || cert.stab_b.ambiguous) {
    cert.outcome = GLOutcome::precondition_failed;
    cert.detail = "stabilizer spectral gap below 1e3; rank decision ambiguous";
    return cert;
  }
  if (!cert.stab_a.trivially_stabilized || !cert.stab_b.trivially_stabilized) {
    cert.outcome = GLOutcome::precondition_failed;
    cert.detail = "tuples are not trivially stabilized";
    return cert;
  }
  if (a.d != b.d || a.ranks() != b.ranks()) {
    cert.outcome = GLOutcome::not_isomorphic;
    cert.detail = "shapes differ";
    return cert;
  }
  GLCertificate<T> found = gl_isomorphism_search(a, b, tol);
  found.stab_a = cert.stab_a;
  found.stab_b = cert.stab_b;
  return found;
}

// n* experiment: fraction of random complex tuples of n rank-r subspaces of
// C^d that are trivially stabilized, swept over n. Theory predicts a sharp
// threshold n*(r, d).
struct NStarRow {
  int n = 0;
  int trivial = 0;
  int trials = 0;
  double fraction = 0;
  double min_gap = std::numeric_limits<double>::infinity();
};

struct NStarTable {
  int d = 0, r = 0;
  bool has_prediction = false;  // theory covers r | d, d/r >= 2 only
  int n_star = 0;               // predicted threshold when has_prediction
  std::vector<NStarRow> rows;
  bool pass = false;  // sharp 0 -> 1 jump at n_star with unambiguous gaps
};

// Predicted threshold; requires r | d and d/r >= 2.
int theoretical_nstar(int d, int r);

NStarTable nstar_experiment(int d, int r, int n_max, int trials,
                            std::uint64_t seed, const Tolerances& tol = {});

std::string format_nstar_table(const NStarTable& table);

}  // namespace subiso
