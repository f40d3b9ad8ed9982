#pragma once

// Shared dense linear-algebra kernels: tolerance policy, deterministic
// orthonormalization, SVD-based rank/nullspace, closed-form 2x2
// factorizations, and quantized lexicographic comparison.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace subiso {

using cplx = std::complex<double>;

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using Mat2 = Eigen::Matrix2d;

enum class Field { real, complex };

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr Field field = Field::real;
  static constexpr const char* name = "real";
  static double conj(double x) { return x; }
};

template <>
struct scalar_traits<cplx> {
  static constexpr Field field = Field::complex;
  static constexpr const char* name = "complex";
  static cplx conj(const cplx& x) { return std::conj(x); }
};

// Error taxonomy. Everything user-visible derives from Error so the CLI can
// map the whole family onto its "error / precondition violation" exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct NotSO2 : Error { using Error::Error; };
struct NotNowhereOrthogonal : Error { using Error::Error; };
struct StarConditionViolated : Error { using Error::Error; };
struct StarClosureViolated : Error { using Error::Error; };
struct InvalidGramian : Error { using Error::Error; };
struct InapplicableMethod : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct EmptyGraph : Error { using Error::Error; };
struct NotRegular : Error { using Error::Error; };
struct DimensionTooSmall : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// All thresholds are relative to problem scale unless stated otherwise.
struct Tolerances {
  double rank_rel = 1e-9;     // rank / independence: keep sigma > rank_rel * sigma_max
  double orth = 1e-9;         // |<u,v>| at or below this counts as orthogonal
  double sv_distinct = 1e-7;  // relative singular-value gap that counts as distinct
  double lex_quantum = 1e-8;  // grid for quantized lexicographic comparison
  double trace_cmp = 1e-7;    // relative tolerance for trace/invariant comparison

  void validate() const {
    if (!(rank_rel > 0) || !(orth > 0) || !(sv_distinct > 0) ||
        !(lex_quantum > 0) || !(trace_cmp > 0))
      throw InvalidInput("Tolerances: all fields must be positive");
    if (lex_quantum < 100 * std::numeric_limits<double>::epsilon())
      throw InvalidInput("Tolerances: lex_quantum must be at least 100*eps");
  }
};

enum class Ordering { less, equal, greater };

inline Mat2 rotation2(double theta) {
  Mat2 r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Modified Gram-Schmidt, columns left to right, one reorthogonalization
// pass. Deterministic; never pivots. Throws RankDeficient when a column's
// residual falls at or below rank_rel times the largest input column norm.
template <class T>
Mat<T> orthonormalize(const Mat<T>& m, const Tolerances& tol = {}) {
  if (m.cols() == 0 || m.rows() == 0)
    throw ShapeMismatch("orthonormalize: empty input");
  if (m.cols() > m.rows())
    throw RankDeficient("orthonormalize: more columns than rows");
  Mat<T> q = m;
  double scale = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    scale = std::max(scale, m.col(j).norm());
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i)
        q.col(j) -= q.col(i) * q.col(i).dot(q.col(j));
    const double nrm = q.col(j).norm();
    if (!(nrm > tol.rank_rel * scale))
      throw RankDeficient("orthonormalize: column " + std::to_string(j) +
                          " is numerically dependent");
    q.col(j) /= nrm;
  }
  return q;
}

// Numerical rank: number of singular values above rank_rel * sigma_max.
// Divide-and-conquer SVD for large inputs; Jacobi below its useful range.
template <class T>
int rank_tol(const Mat<T>& m, const Tolerances& tol = {}) {
  if (m.size() == 0) return 0;
  Vec<double> s;
  if (std::min(m.rows(), m.cols()) >= 32) {
    Eigen::BDCSVD<Mat<T>> svd(m);
    s = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Mat<T>> svd(m);
    s = svd.singularValues();
  }
  if (s.size() == 0 || !(s(0) > 0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.rank_rel * s(0)) ++r;
  return r;
}

// Orthonormal basis of the numerical nullspace (right singular vectors whose
// singular values fall at or below the rank threshold). Columns of the
// result; zero columns when the nullspace is trivial.
template <class T>
Mat<T> nullspace(const Mat<T>& m, const Tolerances& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0)
    return Mat<T>::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Mat<T>> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol.rank_rel * s(0)) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

// Closed-form real 2x2 SVD, m = w * sigma.asDiagonal() * v^T with
// sigma(0) >= sigma(1) >= 0, w a rotation before sign fixing, v in O(2).
// Sign convention: the first nonzero entry of each column of w is positive
// (the matching column of v absorbs the flip).
struct Svd2 {
  Mat2 w;
  Eigen::Vector2d sigma;
  Mat2 v;
};
Svd2 svd_2x2(const Mat2& m);

// Left polar decomposition m = p * w^T with p symmetric positive definite
// and w in O(2). Throws Singular when m is numerically rank deficient.
struct Polar2 {
  Mat2 p;
  Mat2 w;
};
Polar2 polar_left_2x2(const Mat2& m, const Tolerances& tol = {});

// Inverse square root on SO(2): rotation by theta maps to rotation by
// -theta/2, theta taken in the principal branch (-pi, pi]. Throws NotSO2.
Mat2 so2_inv_sqrt(const Mat2& m);

namespace detail {
inline double quantize(double x, double quantum) {
  return std::round(x / quantum);
}
template <class T>
int quantized_cmp(const T& a, const T& b, double quantum) {
  if constexpr (scalar_traits<T>::field == Field::real) {
    const double qa = quantize(a, quantum), qb = quantize(b, quantum);
    if (qa < qb) return -1;
    if (qa > qb) return 1;
    return 0;
  } else {
    const double ra = quantize(a.real(), quantum), rb = quantize(b.real(), quantum);
    if (ra < rb) return -1;
    if (ra > rb) return 1;
    const double ia = quantize(a.imag(), quantum), ib = quantize(b.imag(), quantum);
    if (ia < ib) return -1;
    if (ia > ib) return 1;
    return 0;
  }
}
}  // namespace detail

// Row-major lexicographic comparison on the lex_quantum grid. Quantizing
// before comparing restores a total order that is stable under numerical
// noise well below the grid. Complex entries compare real part first.
template <class T>
Ordering lex_compare(const Mat<T>& a, const Mat<T>& b, const Tolerances& tol = {}) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("lex_compare: shape mismatch");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const int c = detail::quantized_cmp(a(i, j), b(i, j), tol.lex_quantum);
      if (c < 0) return Ordering::less;
      if (c > 0) return Ordering::greater;
    }
  return Ordering::equal;
}

template <class T>
const Mat<T>& lex_min(const Mat<T>& a, const Mat<T>& b, const Tolerances& tol = {}) {
  return lex_compare(a, b, tol) == Ordering::greater ? b : a;
}

// Largest principal angle between the column spans of a and b, computed
// through the sine (norm of the projected residual) so near-identical
// subspaces resolve far below the acos() noise floor.
template <class T>
double max_principal_angle(const Mat<T>& a, const Mat<T>& b,
                           const Tolerances& tol = {}) {
  if (a.rows() != b.rows())
    throw ShapeMismatch("max_principal_angle: ambient dimensions differ");
  const Mat<T> qa = orthonormalize<T>(a, tol);
  const Mat<T> qb = orthonormalize<T>(b, tol);
  if (qa.cols() != qb.cols())
    return std::acos(-1.0) / 2;  // different dimensions: maximal angle
  const Mat<T> resid = qa - qb * (qb.adjoint() * qa);
  Eigen::JacobiSVD<Mat<T>> svd(resid);
  const double s = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  return std::asin(s);
}

}  // namespace subiso
