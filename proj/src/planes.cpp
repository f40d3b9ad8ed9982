#include "subiso/planes.hpp"

namespace subiso {

const char* plane_branch_name(PlaneBranch b) {
  switch (b) {
    case PlaneBranch::distinct_sv: return "distinct_sv";
    case PlaneBranch::isoclinic_reflection: return "isoclinic_reflection";
    case PlaneBranch::isoclinic_rotation: return "isoclinic_rotation";
  }
  return "?";
}

PlaneGramian plane_gramian_from_bases(const SubspaceTuple<double>& t,
                                      const Tolerances& tol) {
  if (t.bases.empty()) throw InvalidInput("plane gramian: empty tuple");
  std::vector<Mat<double>> q;
  for (const auto& b : t.bases) {
    if (b.cols() != 2)
      throw InapplicableMethod("plane gramian: every subspace must have rank 2");
    if (b.rows() != t.d) throw ShapeMismatch("plane gramian: basis row count");
    q.push_back(orthonormalize<double>(b, tol));
  }
  PlaneGramian g;
  g.n = t.n();
  g.blocks.resize(static_cast<std::size_t>(g.n) * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) g.at(i, j) = q[i].transpose() * q[j];
  return g;
}

void validate_plane_gramian(const PlaneGramian& g) {
  if (g.n < 1 || g.blocks.size() != static_cast<std::size_t>(g.n) * g.n)
    throw InvalidGramian("plane gramian: wrong block count");
  for (int i = 0; i < g.n; ++i) {
    if ((g.at(i, i) - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10)
      throw InvalidGramian("plane gramian: diagonal block " + std::to_string(i) +
                           " is not the identity");
    for (int j = 0; j < g.n; ++j)
      if ((g.at(j, i) - g.at(i, j).transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidGramian("plane gramian: block symmetry violated at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

bool check_nowhere_orthogonal(const PlaneGramian& g, const Tolerances& tol) {
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      const Svd2 s = svd_2x2(g.at(i, j));
      const double thresh = tol.rank_rel * s.sigma(0);
      if (!(std::abs(g.at(i, j).determinant()) > thresh * thresh)) return false;
    }
  return true;
}

namespace {

Mat<double> assemble(const PlaneGramian& g) {
  Mat<double> a(2 * g.n, 2 * g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) a.block<2, 2>(2 * i, 2 * j) = g.at(i, j);
  return a;
}

// Nearest rotation to a nearly-orthogonal 2x2 matrix (polar factor with
// det +1), in closed form. Used to polish before so2_inv_sqrt so that its
// strict SO(2) gate never trips on honest near-isoclinic input.
Mat2 nearest_so2(const Mat2& m) {
  return rotation2(std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1)));
}

}  // namespace

CanonicalPlaneGramian canonical_plane_gramian(const PlaneGramian& pg,
                                              const Tolerances& tol) {
  validate_plane_gramian(pg);
  if (!check_nowhere_orthogonal(pg, tol))
    throw NotNowhereOrthogonal(
        "canonical_plane_gramian: a pair of planes is partially orthogonal; "
        "this method does not apply (use the quiver invariant)");

  const int n = pg.n;
  const Mat<double> a = assemble(pg);
  const Mat2 refl = Eigen::Vector2d(1, -1).asDiagonal();
  Mat<double> s_full = Mat<double>::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) s_full.block<2, 2>(2 * i, 2 * i) = refl;

  CanonicalPlaneGramian out;

  // One full scan decides the branch and the ambiguity warning: first block
  // (lex order) whose relative singular-value gap exceeds sv_distinct.
  int bk = -1;
  Svd2 bsvd;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      const Svd2 s = svd_2x2(pg.at(k, l));
      const double gap = (s.sigma(0) - s.sigma(1)) / s.sigma(0);
      if (gap >= tol.sv_distinct / 10 && gap <= tol.sv_distinct * 10)
        out.branch_ambiguous = true;
      if (gap > tol.sv_distinct && bk < 0) {
        bk = k;
        bsvd = s;
      }
    }

  if (bk >= 0) {
    // Distinct-singular-value branch: the SVD of the anchor block pins the
    // bk-th frame up to column signs; polar decompositions propagate it.
    out.branch = PlaneBranch::distinct_sv;
    const Mat2 wk = bsvd.w;
    const Mat2 wk_alt = wk * refl;
    auto build = [&](const Mat2& anchor) {
      Mat<double> d = Mat<double>::Zero(2 * n, 2 * n);
      for (int j = 0; j < n; ++j) {
        Mat2 wj;
        if (j == bk) {
          wj = anchor;
        } else {
          Polar2 p;
          try {
            p = polar_left_2x2(anchor.transpose() * pg.at(bk, j), tol);
          } catch (const Singular&) {
            throw NotNowhereOrthogonal(
                "canonical_plane_gramian: block (" + std::to_string(bk) + "," +
                std::to_string(j) + ") is numerically singular");
          }
          wj = p.w;
        }
        d.block<2, 2>(2 * j, 2 * j) = wj;
      }
      return Mat<double>(d.transpose() * a * d);
    };
    const Mat<double> cand = build(wk);
    const Mat<double> cand_alt = build(wk_alt);
    out.g = lex_min(cand, cand_alt, tol);
    return out;
  }

  // Isoclinic branch: every block is a scalar multiple of O(2).
  std::vector<Mat2> h(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h[i * n + j] =
          pg.at(i, j) / std::sqrt(std::abs(pg.at(i, j).determinant()));
  Mat<double> d_full = Mat<double>::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) d_full.block<2, 2>(2 * j, 2 * j) = h[j];  // H_(0,j)

  Mat<double> h_full(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h_full.block<2, 2>(2 * i, 2 * j) = h[i * n + j];
  const Mat<double> t = d_full * h_full * d_full.transpose();

  int rk = -1, rl = -1;
  for (int k = 0; k < n && rk < 0; ++k)
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      if (t.block<2, 2>(2 * k, 2 * l).determinant() < 0) {
        rk = k;
        rl = l;
        break;
      }
    }

  Mat<double> e_full;
  if (rk >= 0) {
    out.branch = PlaneBranch::isoclinic_reflection;
    const Mat2 q =
        so2_inv_sqrt(nearest_so2(t.block<2, 2>(2 * rk, 2 * rl) * refl));
    e_full = Mat<double>::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) e_full.block<2, 2>(2 * j, 2 * j) = q * h[j];
  } else {
    out.branch = PlaneBranch::isoclinic_rotation;
    e_full = d_full;
  }
  const Mat<double> cand = e_full * a * e_full.transpose();
  const Mat<double> cand_alt = s_full * cand * s_full;
  out.g = lex_min(cand, cand_alt, tol);
  return out;
}

DecisionReport planes_isomorphic(const SubspaceTuple<double>& a,
                                 const SubspaceTuple<double>& b,
                                 const Tolerances& tol) {
  DecisionReport rep;
  rep.method = "planes";
  if (a.n() != b.n()) {
    rep.detail = "subspace counts differ";
    return rep;
  }
  const CanonicalPlaneGramian ca =
      canonical_plane_gramian(plane_gramian_from_bases(a, tol), tol);
  const CanonicalPlaneGramian cb =
      canonical_plane_gramian(plane_gramian_from_bases(b, tol), tol);
  std::string warn;
  if (ca.branch_ambiguous || cb.branch_ambiguous)
    warn = " [warning: branch decision numerically ambiguous]";
  if (ca.branch != cb.branch) {
    rep.detail = std::string("canonical branches differ (") +
                 plane_branch_name(ca.branch) + " vs " +
                 plane_branch_name(cb.branch) + ")" + warn;
    return rep;
  }
  if (lex_compare(ca.g, cb.g, tol) != Ordering::equal) {
    rep.detail = "canonical Gramians differ" + warn;
    return rep;
  }
  rep.isomorphic = true;
  rep.detail = std::string("canonical Gramians match (branch ") +
               plane_branch_name(ca.branch) + ")" + warn;
  return rep;
}

}  // namespace subiso
