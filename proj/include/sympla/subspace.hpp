#pragma once

#include "sympla/types.hpp"

namespace sympla {

// A linear subspace of K^d, stored as a d x k matrix with orthonormal columns.
// The zero subspace is a d x 0 matrix. Subspaces tagged Field::Real keep real
// bases throughout; all arithmetic runs in complex storage.
class Subspace {
 public:
  Subspace() = default;

  // Wraps an orthonormal basis without re-factoring. Internal constructor: the
  // columns must already be orthonormal (and real when field is Real).
  Subspace(Mat orthonormal_basis, Field field);

  // Span of arbitrary columns. Rank is decided by SVD with the cutoff
  // rank_rel * sigma_max.
  static Subspace fromColumns(const Mat& columns, Field field,
                              double rank_rel = Tolerances{}.rank_rel);
  static Subspace zero(Index ambient_dim, Field field);
  static Subspace full(Index ambient_dim, Field field);

  const Mat& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  Index ambientDim() const { return basis_.rows(); }
  Field field() const { return field_; }

  Mat projector() const;  // orthogonal projector onto the subspace, d x d

  bool contains(const Vec& v, double tol = 1e-8) const;

 private:
  Mat basis_;
  Field field_ = Field::Real;
};

Subspace sum(const Subspace& a, const Subspace& b,
             double rank_rel = Tolerances{}.rank_rel);
Subspace intersection(const Subspace& a, const Subspace& b,
                      double rank_rel = Tolerances{}.rank_rel);
Subspace orthogonalComplement(const Subspace& a,
                              double rank_rel = Tolerances{}.rank_rel);

bool containsSubspace(const Subspace& outer, const Subspace& inner,
                      double tol = 1e-8);
bool equalSubspaces(const Subspace& a, const Subspace& b, double tol = 1e-8);

// dim(a cap b) - dim(ambient / (a + b)), the index of the Fredholm pair (a, b).
long fredholmIndex(const Subspace& a, const Subspace& b,
                   double rank_rel = Tolerances{}.rank_rel);

// Same, but with codimension measured inside a given ambient subspace that
// must contain both a and b.
long fredholmIndexIn(const Subspace& a, const Subspace& b,
                     const Subspace& ambient,
                     double rank_rel = Tolerances{}.rank_rel);

// dim a/(a cap b) - dim b/(a cap b), the relative dimension [a - b].
long relativeDimension(const Subspace& a, const Subspace& b,
                       double rank_rel = Tolerances{}.rank_rel);

// One-sided gap: sup over unit u in a of dist(u, b). Zero when a is zero.
double gapDelta(const Subspace& a, const Subspace& b);
// Symmetric gap: max of the two one-sided gaps.
double gapHat(const Subspace& a, const Subspace& b);
// Minimum gap gamma(a, b) = inf over u in a \ b of dist(u, b)/dist(u, a cap b);
// equals 1 when a is contained in b.
double minimumGap(const Subspace& a, const Subspace& b,
                  double rank_rel = Tolerances{}.rank_rel);

// Smallest singular value of [basis(a) basis(b)]; a quantitative measure of
// transversality of the direct sum a + b.
double directSumMargin(const Subspace& a, const Subspace& b);

// Projection onto `onto` along `along`; requires onto + along = K^d direct.
Mat obliqueProjector(const Subspace& onto, const Subspace& along,
                     double rank_rel = Tolerances{}.rank_rel);

}  // namespace sympla
