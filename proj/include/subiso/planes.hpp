#pragma once

// Tuples of real planes (rank-2 subspaces) up to isometry, decided through a
// canonical representative of the block Gramian under block-diagonal O(2)
// conjugation. Requires every pair of planes to be nowhere orthogonal.

#include "subiso/core.hpp"
#include "subiso/tuple.hpp"

#include <vector>

namespace subiso {

// n x n grid of 2x2 blocks, row-major. Symmetric with identity diagonal:
// block (j,i) is the transpose of block (i,j).
struct PlaneGramian {
  int n = 0;
  std::vector<Mat2> blocks;

  const Mat2& at(int i, int j) const { return blocks[i * n + j]; }
  Mat2& at(int i, int j) { return blocks[i * n + j]; }
};

enum class PlaneBranch { distinct_sv, isoclinic_reflection, isoclinic_rotation };
const char* plane_branch_name(PlaneBranch b);

struct CanonicalPlaneGramian {
  Mat<double> g;  // 2n x 2n canonical representative
  PlaneBranch branch = PlaneBranch::distinct_sv;
  // Warning, not an error: some singular-value gap fell within a factor 10
  // of sv_distinct, so the branch decision is numerically delicate.
  bool branch_ambiguous = false;
};

// Orthonormalizes the d x 2 bases and assembles the cross-Gramian blocks.
PlaneGramian plane_gramian_from_bases(const SubspaceTuple<double>& t,
                                      const Tolerances& tol = {});

// Shape, identity diagonal, and block symmetry; throws InvalidGramian.
void validate_plane_gramian(const PlaneGramian& g);

// Every off-diagonal block must satisfy |det| > (rank_rel * ||block||_2)^2.
bool check_nowhere_orthogonal(const PlaneGramian& g, const Tolerances& tol = {});

CanonicalPlaneGramian canonical_plane_gramian(const PlaneGramian& g,
                                              const Tolerances& tol = {});

DecisionReport planes_isomorphic(const SubspaceTuple<double>& a,
                                 const SubspaceTuple<double>& b,
                                 const Tolerances& tol = {});

}  // namespace subiso
