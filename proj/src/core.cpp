#include "subiso/core.hpp"

namespace subiso {

// Closed-form 2x2 SVD via the rotation/reflection split:
//   m = [[e+f, g-h], [g+h, e-f]]  =>  sigma = (q+r, q-r),
//   left angle = (a1+a2)/2, right angle = (a1-a2)/2
// with q = hypot(e,h), r = hypot(f,g), a1 = atan2(g,f), a2 = atan2(h,e).
// No iteration, so the result is an exact function of the input bits.
Svd2 svd_2x2(const Mat2& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double e = (a + d) / 2, f = (a - d) / 2;
  const double g = (c + b) / 2, h = (c - b) / 2;
  const double q = std::hypot(e, h), r = std::hypot(f, g);
  const double a1 = std::atan2(g, f), a2 = std::atan2(h, e);

  Svd2 out;
  out.w = rotation2((a1 + a2) / 2);
  out.v = rotation2((a1 - a2) / 2);
  out.sigma << q + r, q - r;
  if (out.sigma(1) < 0) {  // absorb the negative second value into v
    out.sigma(1) = -out.sigma(1);
    out.v.col(1) = -out.v.col(1);
  }
  for (int j = 0; j < 2; ++j) {  // sign convention on the columns of w
    const double lead = out.w(0, j) != 0 ? out.w(0, j) : out.w(1, j);
    if (lead < 0) {
      out.w.col(j) = -out.w.col(j);
      out.v.col(j) = -out.v.col(j);
    }
  }
  return out;
}

Polar2 polar_left_2x2(const Mat2& m, const Tolerances& tol) {
  const Svd2 s = svd_2x2(m);
  if (!(s.sigma(1) > tol.rank_rel * s.sigma(0)))
    throw Singular("polar_left_2x2: numerically singular input");
  Polar2 out;
  out.p = s.w * s.sigma.asDiagonal() * s.w.transpose();
  out.w = s.v * s.w.transpose();  // m = p * w^T
  return out;
}

Mat2 so2_inv_sqrt(const Mat2& m) {
  const double ortho_err = (m.transpose() * m - Mat2::Identity()).norm();
  const double det_err = std::abs(m.determinant() - 1.0);
  if (ortho_err > 1e-8 || det_err > 1e-8)
    throw NotSO2("so2_inv_sqrt: input is not a rotation");
  const double theta = std::atan2(m(1, 0), m(0, 0));
  return rotation2(-theta / 2);
}

}  // namespace subiso
