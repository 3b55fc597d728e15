#pragma once

#include <vector>

#include "sympla/subspace.hpp"
#include "sympla/types.hpp"

namespace sympla {

// Ambient data for linear relations: Z = K^d carries the inner product
// <u, v> = u^* G v (G Hermitian positive definite; identity for the Euclidean
// case), and splits as Z = X + Y into two complementary subspaces. P denotes
// the projection on X along Y. A relation is any subspace M of Z, read as a
// multivalued map from X to Y through dom(M) = P M and the fibers
// M x = {y in Y : exists z in M, P z = x, (I - P) z = y}.
class RelationSpace {
 public:
  RelationSpace(Subspace X, Subspace Y, Mat gram,
                double rank_rel = Tolerances{}.rank_rel);
  static RelationSpace euclidean(Subspace X, Subspace Y,
                                 double rank_rel = Tolerances{}.rank_rel);

  Index ambientDim() const { return gram_.rows(); }
  const Subspace& X() const { return x_; }
  const Subspace& Y() const { return y_; }
  const Mat& gram() const { return gram_; }
  const Mat& projX() const { return proj_x_; }  // projection on X along Y

  double norm(const Vec& v) const;
  double operatorNorm(const Mat& m) const;  // norm induced by the Gram metric
  double normP() const;                     // |P|
  double normIMinusP() const;               // |I - P|
  double eta() const { return normP() + normIMinusP(); }

  // One-sided gap delta(M, N) = sup over unit u in M of dist(u, N), and the
  // minimum gap gamma(M, N), both in the Gram metric.
  double gapDelta(const Subspace& m, const Subspace& n) const;
  double gapHat(const Subspace& m, const Subspace& n) const;
  double minimumGap(const Subspace& m, const Subspace& n,
                    double rank_rel = Tolerances{}.rank_rel) const;
  double gammaXY(double rank_rel = Tolerances{}.rank_rel) const;

  // Relation anatomy.
  Subspace domainOf(const Subspace& m, double rank_rel = Tolerances{}.rank_rel) const;
  Subspace indeterminacyOf(const Subspace& m,  // M0 = M cap Y
                           double rank_rel = Tolerances{}.rank_rel) const;

  // a(M) = sup over x in dom(M) \ 0 of dist(x, M x) / |x|; 0 on zero domain.
  // Computed exactly through a Hermitian generalized eigenproblem: for fixed
  // unit x the fiber distance is the value of an affine least-squares problem,
  // which is a quadratic form in x.
  double alphaOf(const Subspace& m, double rank_rel = Tolerances{}.rank_rel) const;

  // |M| = sup over x in dom(M) \ 0 of inf{|y| : y in M x} / |x|, exactly.
  double relationNorm(const Subspace& m, double rank_rel = Tolerances{}.rank_rel) const;

  // b(s, t, M, N): sup over x1 in dom(M) \ 0 and x2 in dom(N) with
  // |x2 - x1| <= s |x1| of inf{dist(y1, N x2) : y1 in M x1, |y1| <= t |x1|},
  // normalized by |x1|. The inner problem is solved exactly (norm-constrained
  // affine least squares); the outer supremum is certified from below by
  // projected gradient ascent from `starts` starting points plus dense
  // sampling. Requires s > delta(dom M, dom N) and t > |M|.
  double bLowerBound(const Subspace& m, const Subspace& n, double s, double t,
                     int starts = 64, unsigned long long seed = 0,
                     double rank_rel = Tolerances{}.rank_rel) const;

 private:
  Subspace x_, y_;
  Mat gram_;
  Mat gram_chol_;  // upper factor U with G = U^* U; |v| = |U v|_2
  Mat proj_x_;
};

// Both sides of each inequality, evaluated so that `lhs <= rhs + slack` is the
// tested statement.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double slack = 1e-9) const { return lhs <= rhs + slack; }
};

// The estimates tied to one relation M or a pair (M, N): lower bounds for
// a(M), |M|, gamma(M, Y), continuity bounds under perturbation and the gap
// criterion built from b(s, t, M, N).
std::vector<InequalityCheck> relationInequalities(const RelationSpace& rs,
                                                  const Subspace& m, const Subspace& n,
                                                  double s, double t,
                                                  int starts = 64,
                                                  unsigned long long seed = 0,
                                                  double rank_rel = Tolerances{}.rank_rel);

// delta(A M, B N) <= |C| (|A - B| + |B| delta(M, N)) with C the inverse of A
// restricted to A M; returns lhs/rhs in the Euclidean metric of the codomain.
InequalityCheck operatorImageGapBound(const Mat& a, const Mat& b, const Subspace& m,
                                      const Subspace& n,
                                      double rank_rel = Tolerances{}.rank_rel);

}  // namespace sympla
