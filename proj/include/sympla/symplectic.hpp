#pragma once

#include "sympla/quadform.hpp"
#include "sympla/subspace.hpp"
#include "sympla/types.hpp"

namespace sympla {

struct SymplecticReduction;

// A finite-dimensional symplectic vector space over R or C. The form is
// omega(x, y) = x^* Omega y with Omega skew-Hermitian and invertible, so it is
// conjugate-linear in the first argument and omega(y, x) = -conj(omega(x, y)).
class SymplecticSpace {
 public:
  SymplecticSpace() = default;

  // Standard space K^{2n} with Omega = [[0, -I], [I, 0]]. The first n basis
  // vectors span the horizontal Lagrangian X, the last n the vertical one Y.
  static SymplecticSpace standard(Index n, Field field);

  // General space from a user form; validates skew-Hermitian symmetry and
  // invertibility against symplectic_rel.
  static SymplecticSpace fromForm(Mat omega, Field field,
                                  double symplectic_rel = Tolerances{}.symplectic_rel);

  Index dim() const { return omega_.rows(); }
  Field field() const { return field_; }
  const Mat& form() const { return omega_; }

  Complex eval(const Vec& x, const Vec& y) const;

  // The omega-annihilator V^omega = {x : omega(x, v) = 0 for all v in V}.
  Subspace annihilator(const Subspace& v, double rank_rel = Tolerances{}.rank_rel) const;

  bool isIsotropic(const Subspace& v, double tol = 1e-8) const;
  bool isCoisotropic(const Subspace& v, double tol = 1e-8,
                     double rank_rel = Tolerances{}.rank_rel) const;
  bool isLagrangian(const Subspace& v, double tol = 1e-8) const;
  // True when the form restricted to v is nondegenerate.
  bool isSymplecticSubspace(const Subspace& v, double rank_rel = Tolerances{}.rank_rel) const;

  // A Lagrangian complement of a Lagrangian subspace, built from a dual frame:
  // F0 solves L^* Omega F0 = I and F = F0 + L (F0^* Omega F0) / 2 is isotropic.
  Subspace lagrangianComplement(const Subspace& lambda,
                                double rank_rel = Tolerances{}.rank_rel) const;

  // A Lagrangian transversal to both arguments, found deterministically by
  // shifting the complement of lambda along graph directions. The shifts walk
  // a fixed list first and then a seeded pseudorandom list; failure to reach
  // margin_floor within the budget raises NumericalError.
  Subspace commonTransversal(const Subspace& lambda, const Subspace& mu,
                             unsigned long long seed = 0,
                             double margin_floor = 1e-6) const;
  // Same, but transversal to all four given Lagrangians (used for handover
  // across one engine step).
  Subspace commonTransversal4(const Subspace& l0, const Subspace& m0,
                              const Subspace& l1, const Subspace& m1,
                              unsigned long long seed = 0,
                              double margin_floor = 1e-6) const;

  // Symplectic reduction by a coisotropic subspace W: the reduced space is
  // W / W^omega, realized on the orthonormal section W cap (W^omega)^perp.
  using Reduction = SymplecticReduction;
  Reduction reduceBy(const Subspace& w, double rank_rel = Tolerances{}.rank_rel) const;
  // Reduction by the annihilator of an isotropic subspace w (the projection
  // associated with w).
  Reduction reduceByIsotropic(const Subspace& w, double rank_rel = Tolerances{}.rank_rel) const;

  // Image of a subspace under the reduction: (v cap W + W^omega) / W^omega,
  // expressed in section coordinates.
  Subspace reduceSubspace(const Reduction& red, const Subspace& v,
                          double rank_rel = Tolerances{}.rank_rel) const;

  // The form Q(alpha, beta; gamma)(z1, z2) = omega(x1, y2) on gamma cap
  // (alpha + beta), where z_j = x_j + y_j with x_j in alpha, y_j in beta.
  // alpha and beta must be isotropic; the result is Hermitian when gamma is.
  HermitianForm tripleForm(const Subspace& alpha, const Subspace& beta,
                           const Subspace& gamma,
                           double rank_rel = Tolerances{}.rank_rel) const;

  // Validates M^* Omega M = Omega within symplectic_rel (relative to |Omega|).
  bool isSymplecticMatrix(const Mat& m,
                          double symplectic_rel = Tolerances{}.symplectic_rel) const;
  double symplecticDefect(const Mat& m) const;

  // The same space with complex scalars (identity on complex spaces).
  SymplecticSpace complexified() const;

 private:
  Mat omega_;
  Field field_ = Field::Real;
};

struct SymplecticReduction {
  SymplecticSpace reduced;
  Subspace W;
  Subspace Womega;
  Mat section;  // d x r orthonormal basis of the section
};

// Product space (Z1 x Z2, (-omega1) x omega2) used for graphs of maps Z1->Z2.
SymplecticSpace productSpace(const SymplecticSpace& s1, const SymplecticSpace& s2);

// Graph {(x, Mx)} of a matrix as a subspace of K^{d1 + d2}. For symplectic M
// the graph is Lagrangian in the product space.
Subspace graphOf(const Mat& m, Field field, double rank_rel = Tolerances{}.rank_rel);

}  // namespace sympla
