#pragma once

#include <vector>

#include "sympla/spgroup.hpp"
#include "sympla/types.hpp"

namespace sympla {

// Coefficients of the quadratic functional
//   I(x, y) = integral of <p x' + q x, y'> + <q^* x', y> + <r x, y>
// sampled on [0, 1]; p Hermitian positive definite, r Hermitian. Between
// samples the coefficients are interpolated linearly; beyond t = 1 they are
// extended through the frame matrix a by
//   p(t + l) = a^{-l*} p(t) a^{-l}, and likewise for q and r,
// which matches admissible curves satisfying x(t + l) = a^{-l} x(t).
struct MorseData {
  std::vector<double> t;  // strictly increasing, t.front() = 0, t.back() = 1
  std::vector<Mat> p, q, r;
  Mat a;  // invertible frame matrix
  Field field = Field::Real;
};

void validateMorseData(const MorseData& data);

// Coefficients at arbitrary time in [0, k].
struct Coefficients {
  Mat p, q, r;
};
Coefficients coefficientsAt(const MorseData& data, double time);

// Morse index and nullity of the functional on [0, k] with the boundary
// condition x(k) = a^{-k} x(0), computed with P1 finite elements on a uniform
// mesh (mesh_per_unit elements per unit interval, two-point Gauss rule).
struct GalerkinResult {
  Index morse_index = 0;
  Index nullity = 0;
  Index dofs = 0;
};
GalerkinResult galerkinMorseIndex(const MorseData& data, int k, int mesh_per_unit,
                                  double eig_rel = Tolerances{}.eig_rel);

// The linear Hamiltonian system induced by the functional: with momentum
// y = p x' + q x and u = (y, x),
//   b(t) = [[p^{-1}, -p^{-1} q], [-q^* p^{-1}, q^* p^{-1} q - r]],
//   u' = J b u with J = [[0, -I], [I, 0]],
// integrated by the implicit midpoint rule with step 1/(256 ceil |b|_inf) and
// symplectic re-projection every 32 steps. The frame of the iterated problem
// is P = diag(a^{-*}, a).
struct HamiltonianPath {
  std::vector<MatrixSample> gamma;  // fundamental solution on [0, 1]
  Mat P;
  SymplecticSpace space;  // standard structure of dimension 2n, complex field
};
HamiltonianPath hamiltonianPath(const MorseData& data, int keep_samples = 65);

// Fourier-side Morse index for constant coefficients p = I, q = 0, r constant
// and a unitary frame a commuting with r (used as an independent oracle).
// On a joint eigenvector with r v = rho v and a^{-k} v = e^{i theta} v the
// admissible curves e^{i omega t} v have omega = (theta + 2 pi j) / k, so the
// index counts the pairs with ((theta + 2 pi j) / k)^2 + rho < 0 over j in Z.
Index fourierMorseIndex(const Mat& r, const Mat& a, int k);

}  // namespace sympla
