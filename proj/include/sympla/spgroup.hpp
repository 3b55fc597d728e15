#pragma once

#include <vector>

#include "sympla/maslov.hpp"
#include "sympla/quadform.hpp"
#include "sympla/subspace.hpp"
#include "sympla/symplectic.hpp"
#include "sympla/types.hpp"

namespace sympla {

struct MatrixSample {
  double s = 0.0;
  Mat m;
};

struct MaslovTypeResult {
  long plus = 0;
  long minus = 0;
  std::vector<Index> nu;  // dim(graph(M(s)) cap W(s)) at each sample
  Index runs = 0;
};

// Index of a path of symplectic matrices against a Lagrangian path W in the
// product space (Z x Z, (-omega) x omega): the pair engine applied to
// (graph(M(s)), W(s)). W may hold one subspace (constant) or one per sample.
MaslovTypeResult maslovTypeIndex(const SymplecticSpace& sp,
                                 const std::vector<MatrixSample>& path,
                                 const std::vector<Subspace>& w,
                                 const MaslovOptions& opt = {});

// Index against the graph of a fixed symplectic matrix P.
MaslovTypeResult maslovTypeIndexAgainstMatrix(const SymplecticSpace& sp,
                                              const std::vector<MatrixSample>& path,
                                              const Mat& p,
                                              const MaslovOptions& opt = {});

// Index against z I for |z| = 1; real input is complexified first.
MaslovTypeResult maslovTypeIndexAtUnitScalar(const SymplecticSpace& sp,
                                             const std::vector<MatrixSample>& path,
                                             Complex z, const MaslovOptions& opt = {});

// dim ker(M - z I).
Index eigenspaceDim(const Mat& m, Complex z, double rank_rel = Tolerances{}.rank_rel);

// ----- closed forms for block-triangular paths ------------------------------

// Blocks of M with respect to a Lagrangian splitting (X, Y): the matrix is
// rewritten in [basis(X) basis(Y)] coordinates and cut into [[A, B], [C, D]].
struct BlockSplit {
  Mat A, B, C, D;
  Mat pairing;  // N with omega(x, y) = x^* N y for x in X-, y in Y-coordinates
};
BlockSplit splitBlocks(const SymplecticSpace& sp, const Mat& m,
                       const Subspace& X, const Subspace& Y);

// Data for one sample of the triangular closed form: the matrix blocks plus
// the components R1 (inside X x X) and R2 (inside Y x Y) of the Lagrangian
// W = R1 + R2 of the product space.
struct TriangularSample {
  double s = 0.0;
  Mat m;
  Subspace R1, R2;
};

// Embedding of W = R1 + R2 into the product space of sp with itself: R1 is
// given in X x X coordinates (pairs (x1, x2)), R2 in Y x Y coordinates, and
// the result is spanned by (Xb u1, Xb u2) and (Yb v1, Yb v2).
Subspace productLagrangianFromComponents(const SymplecticSpace& sp, const Subspace& X,
                                         const Subspace& Y, const Subspace& r1,
                                         const Subspace& r2,
                                         double rank_rel = Tolerances{}.rank_rel);

struct TriangularIndexResult {
  long plus = 0;
  long minus = 0;
  std::vector<Index> nu;           // per-sample nullity from the closed form
  std::vector<Index> graph_dims;   // dim(graph(A) cap R1) or dim(graph(D) cap R2)
  std::vector<Index> kernel_dims;  // dim ker of the boundary form
};

// Upper-triangular case (C = 0):
//   g(s)(y1, y2) = conj(omega_XY(B y2, D y1)) on {y : (y, D y) in R2},
//   plus  = + dim(graph(A) cap R1)(first) - (last) + m^-(g(last)) - m^-(g(first))
//   minus = - dim(graph(A) cap R1)(first) + (last) - m^+(g(last)) + m^+(g(first))
//   nu(s) = dim ker g(s) + dim(graph(A(s)) cap R1(s)).
TriangularIndexResult triangularMaslovTypeUpper(const SymplecticSpace& sp,
                                                const std::vector<TriangularSample>& path,
                                                const Subspace& X, const Subspace& Y,
                                                const Tolerances& tol = {});

// Lower-triangular case (B = 0):
//   h(s)(x1, x2) = omega_XY(A x1, C x2) on {x : (x, A x) in R1},
//   plus  = + dim(graph(D) cap R2)(first) - (last) + m^+(h(last)) - m^+(h(first))
//   minus = - dim(graph(D) cap R2)(first) + (last) - m^-(h(last)) + m^-(h(first))
//   nu(s) = dim ker h(s) + dim(graph(D(s)) cap R2(s)).
TriangularIndexResult triangularMaslovTypeLower(const SymplecticSpace& sp,
                                                const std::vector<TriangularSample>& path,
                                                const Subspace& X, const Subspace& Y,
                                                const Tolerances& tol = {});

// ----- splitting numbers -----------------------------------------------------

struct SplittingNumbers {
  long plus = 0;        // S^+(z): limit of the positive rule over arcs z e^{-is}
  long minus = 0;       // S^-(z): the same over arcs z e^{+is}
  long plus_neg = 0;    // S^+_+(z) = -(negative rule) over arcs z e^{-is}
  long minus_neg = 0;   // S^-_+(z) over arcs z e^{+is}
  Index nu = 0;         // dim ker(M - z I)
  double arc = 0.0;     // arc length actually used
};

// Splitting numbers of a symplectic matrix at |z| = 1, computed from short
// spectral arcs s -> M z^{-1} e^{-+ i s} indexed against the diagonal. The arc
// length is min(pi/180, half the angular distance from z to the nearest other
// unit-circle eigenvalue); 32 samples per arc.
SplittingNumbers splittingNumbers(const SymplecticSpace& sp, const Mat& m, Complex z,
                                  const Tolerances& tol = {});

struct TriangularSplittingResult {
  long plus = 0, minus = 0;        // both equal the same closed form
  long plus_neg = 0, minus_neg = 0;
  Index nu = 0;                    // dim ker g/h + matching eigenspace dim
  Index eig_dim = 0;               // dim ker(A - z I) resp. dim ker(D - z I)
  Inertia form_inertia;
};

// Closed form, upper-triangular case: with g on ker(D - z I_Y),
//   S^+ = S^- = dim ker(A - z I_X) - m^-(g),
//   S^+_+ = S^-_+ = dim ker(A - z I_X) - m^+(g),
//   nu   = dim ker g + dim ker(A - z I_X).
TriangularSplittingResult splittingTriangularUpper(const SymplecticSpace& sp, const Mat& m,
                                                   Complex z, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol = {});

// Closed form, lower-triangular case: with h(x1, x2) = omega_XY(A x1, C x2) on
// ker(A - z I_X),
//   S^+ = S^- = dim ker(D - z I_Y) - m^+(h),
//   S^+_+ = S^-_+ = dim ker(D - z I_Y) - m^-(h),
//   nu   = dim ker h + dim ker(D - z I_Y).
TriangularSplittingResult splittingTriangularLower(const SymplecticSpace& sp, const Mat& m,
                                                   Complex z, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol = {});

// ----- iteration -------------------------------------------------------------

// Extension of a path gamma on [0, 1] with gamma(0) = I to [0, k] through the
// frame P: on [j, j+1] the extension is P^j gamma(t - j) (P^{-1} gamma(1))^j.
std::vector<MatrixSample> iteratePath(const std::vector<MatrixSample>& gamma,
                                      const Mat& p, int k);

// i(k, gamma; P) = index of P^{-k} gamma(k, P) at the unit scalar 1. Both
// counting rules are returned; the discrete Morse identities (morse_oracle)
// consume the negated minus field, the closed forms below match plus.
MaslovTypeResult iterationIndex(const SymplecticSpace& sp,
                                const std::vector<MatrixSample>& gamma, const Mat& p,
                                int k, const MaslovOptions& opt = {});

// A deterministic symplectic path from I to M sampled at `samples` points.
// Uses the principal logarithm after a seeded symplectic shear that moves the
// spectrum off the negative real axis.
std::vector<MatrixSample> pathFromIdentity(const SymplecticSpace& sp, const Mat& m,
                                           int samples, unsigned long long seed = 0);

// f(k, M, P) = i(k, gamma; P) - k i(1, gamma; P) for any path gamma from I to
// M; the value does not depend on the choice of path. Computed under both
// counting rules.
struct FrameCorrection {
  long plus = 0;
  long minus = 0;
};
FrameCorrection iterationFrameCorrection(const SymplecticSpace& sp, const Mat& m,
                                         const Mat& p, int k,
                                         const MaslovOptions& opt = {});

// Accumulated off-diagonal blocks of powers of [[A, B], [0, D]] and
// [[A, 0], [C, D]]: B(k) = sum A^j B D^{k-1-j}, C(k) = sum D^j C A^{k-1-j}.
Mat accumulatedUpperBlock(const Mat& a, const Mat& b, const Mat& d, int k);
Mat accumulatedLowerBlock(const Mat& a, const Mat& c, const Mat& d, int k);

struct IterationClosedFormResult {
  long value = 0;        // f(k, P, I)
  Inertia form_inertia;  // inertia of g(k) resp. h(k)
  Index ker_a = 0, ker_ak = 0, ker_dk = 0;
};

// Closed forms for f(k, P, I) when P is block-triangular:
// upper: (1-k) n + k dim ker(A - I) - dim ker(A^k - I) + m^-(g(k)) - k m^-(g(1))
//        with g(k)(y1, y2) = conj(omega_XY(B(k) y2, D^k y1)) on ker(D^k - I),
// lower: (1-k) n + k dim ker(A - I) - dim ker(D^k - I) + m^+(h(k)) - k m^+(h(1))
//        with h(k)(x1, x2) = conj(omega_XY(A^k x1, C(k) x2)) on ker(A^k - I).
IterationClosedFormResult iterationClosedFormUpper(const SymplecticSpace& sp, const Mat& p,
                                                   int k, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol = {});
IterationClosedFormResult iterationClosedFormLower(const SymplecticSpace& sp, const Mat& p,
                                                   int k, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol = {});

// ----- parity invariants -----------------------------------------------------

// dim of the complex root space of M at z: d - rank((M - z I)^d / |..|).
Index rootSpaceDim(const Mat& m, Complex z, double rank_rel = Tolerances{}.rank_rel);

// Total algebraic multiplicity of real eigenvalues < -1.
Index negativeHyperbolicCount(const Mat& m, double rank_rel = Tolerances{}.rank_rel,
                              double cluster_tol = 1e-7);

// alpha~(M) = (multiplicity of eigenvalues < -1) + dim E_{-1}(M) / 2  (mod 2).
int alphaTildeParity(const Mat& m, double rank_rel = Tolerances{}.rank_rel);

// D_z(M) = (-1)^{n-1} z^{-n} det(M - z I_{2n}); real on the unit circle for
// real symplectic M.
double characteristicSign(const Mat& m, Complex z);

// Parity statement for a path of real symplectic matrices:
//   i_1(gamma) = alpha~(gamma(end)) + S^+_{gamma(end)}(1)
//              - alpha~(gamma(0)) - S^+_{gamma(0)}(1)   (mod 2).
// Both sides are returned as parities in {0, 1} plus the raw ingredients.
struct Mod2Report {
  int index_parity = 0;
  int formula_parity = 0;
  long i1 = 0;
  int alpha_end = 0, alpha_start = 0;
  long splitting_end = 0, splitting_start = 0;
};
Mod2Report mod2Index(const SymplecticSpace& sp, const std::vector<MatrixSample>& path,
                     const MaslovOptions& opt = {});

}  // namespace sympla
