#pragma once

#include <vector>

#include "sympla/maslov.hpp"
#include "sympla/quadform.hpp"
#include "sympla/subspace.hpp"
#include "sympla/symplectic.hpp"
#include "sympla/types.hpp"

namespace sympla {

// One sample of a pair path together with a Lagrangian splitting X + Y of the
// ambient space, with respect to which lambda and mu are read as linear
// relations from X to Y.
struct SplitSample {
  double s = 0.0;
  Subspace X, Y;
  Subspace lambda, mu;
};

// dom(lambda) = projection of lambda onto X along Y.
Subspace relationDomain(const Subspace& lambda, const Subspace& X, const Subspace& Y,
                        double rank_rel = Tolerances{}.rank_rel);

// The difference form Q(x1, x2) = omega(x1, (lambda - mu) x2) on
// dom(lambda) cap dom(mu); well-defined because X and Y are Lagrangian.
HermitianForm triangleForm(const SymplecticSpace& sp, const SplitSample& sample,
                           double rank_rel = Tolerances{}.rank_rel);

struct TriangleIndexResult {
  long plus = 0;
  long minus = 0;
  // Per sample: dim(lambda cap mu), dim ker Q, dim(lambda cap Y cap mu cap Y).
  std::vector<Index> nullities;
  std::vector<Index> kernel_dims;
  std::vector<Index> ab_dims;
};

// Endpoint formula for the index of a pair path in triangular position:
//   plus  = + dim(lambda cap mu cap Y)(first) - dim(lambda cap mu cap Y)(last)
//           + m^+(Q(last)) - m^+(Q(first))
//   minus = - dim(lambda cap mu cap Y)(first) + dim(lambda cap mu cap Y)(last)
//           - m^-(Q(last)) + m^-(Q(first))
// together with the per-sample nullity decomposition
//   dim(lambda cap mu) = dim ker Q + dim(lambda cap Y cap mu cap Y).
TriangleIndexResult triangleIndex(const SymplecticSpace& sp,
                                  const std::vector<SplitSample>& samples,
                                  double rank_rel = Tolerances{}.rank_rel,
                                  double eig_rel = Tolerances{}.eig_rel);

// Fredholm indices of the X- and Y-traces of a diagonal pair, computed inside
// X and Y respectively: a = index(lambda cap X, mu cap X) within X, and
// b = the same within Y.
struct DiagonalTraceIndices {
  long a = 0;
  long b = 0;
};
DiagonalTraceIndices diagonalTraceIndices(const SymplecticSpace& sp,
                                          const Subspace& X, const Subspace& Y,
                                          const Subspace& lambda, const Subspace& mu,
                                          double rank_rel = Tolerances{}.rank_rel);

// Structure data of a Lagrangian pair (alpha, beta) read as relations over the
// splitting X + Y: the Y-traces W1 = alpha cap Y and W2 = beta cap Y, the
// domains dom = W^omega cap X, the osculating pair gamma = dom_alpha + W1,
// delta = dom_beta + W2, and the two counting identities
//   dim Y/(W1 + W2) = dim(W1^omega cap W2^omega cap X),
//   dim(W1 cap W2)  = dim X/(dom_alpha + dom_beta).
struct TriangleStructure {
  Subspace W1, W2;
  Subspace dom_alpha, dom_beta;
  Subspace gamma, delta;
  Index y_codim = 0;      // dim Y/(W1 + W2)
  Index x_meet = 0;       // dim(W1^omega cap W2^omega cap X)
  Index trace_meet = 0;   // dim(W1 cap W2)
  Index x_codim = 0;      // dim X/(dom_alpha + dom_beta)
  bool identities_hold = false;
  bool domains_match = false;  // dom = X-projection of the relation
  bool osculating_lagrangian_pair = false;
};
TriangleStructure triangleStructure(const SymplecticSpace& sp, const Subspace& X,
                                    const Subspace& Y, const Subspace& alpha,
                                    const Subspace& beta,
                                    double rank_rel = Tolerances{}.rank_rel);

// Index of a path whose members both split along X + Y at every sample. The
// index reduces to intersection bookkeeping; all three displayed forms are
// returned, together with the per-sample trace indices a(s) (within X) and
// b(s) (within Y), which are constant and opposite along such a path.
struct DiagonalMaslovResult {
  long plus = 0;                    // half-difference of dim(lambda cap mu)
  long minus = 0;                   // equals -plus on diagonal paths
  long plus_x = 0, plus_y = 0;      // X- and Y-intersection forms
  std::vector<Index> cap_dims;      // dim(lambda cap mu) per sample
  std::vector<Index> cap_x, cap_y;  // dim(lambda cap mu cap X), (.. cap Y)
  std::vector<long> a, b;           // per-sample trace indices
};
DiagonalMaslovResult maslovDiagonal(const SymplecticSpace& sp,
                                    const std::vector<SplitSample>& samples,
                                    double rank_rel = Tolerances{}.rank_rel);

// The interpolation alpha(t) = P(t) lambda + (lambda cap Y), where P(t) scales
// the Y-component by t. It connects the triangular osculate
// (lambda cap Y)^omega cap X + (lambda cap Y) at t = 0 to lambda at t = 1
// through Lagrangians with constant trace lambda cap Y and constant domain.
Subspace lagToTriangle(const SymplecticSpace& sp, const Subspace& X, const Subspace& Y,
                       const Subspace& lambda, double t,
                       double rank_rel = Tolerances{}.rank_rel);

}  // namespace sympla
