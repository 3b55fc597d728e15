#pragma once

#include "sympla/subspace.hpp"
#include "sympla/types.hpp"

namespace sympla {

// Inertia of a Hermitian matrix: eigenvalues are classified against the cutoff
// eig_rel * max(1, spectral radius).
Inertia matrixInertia(const Mat& hermitian, double eig_rel = Tolerances{}.eig_rel);

// A Hermitian sesquilinear form living on a carrier subspace, conjugate-linear
// in its first argument. The matrix is expressed in the coordinates of the
// carrier's orthonormal basis.
class HermitianForm {
 public:
  HermitianForm() = default;

  // Symmetrizes the matrix after checking the Hermitian defect against
  // defect_rel * max(1, norm). A larger defect raises NumericalError.
  HermitianForm(Subspace carrier, Mat matrix, double defect_rel = 1e-8);

  const Subspace& carrier() const { return carrier_; }
  const Mat& matrix() const { return matrix_; }
  Index rank() const { return matrix_.rows(); }

  Inertia inertia(double eig_rel = Tolerances{}.eig_rel) const;
  Index positiveIndex(double eig_rel = Tolerances{}.eig_rel) const;
  Index negativeIndex(double eig_rel = Tolerances{}.eig_rel) const;
  Index nullity(double eig_rel = Tolerances{}.eig_rel) const;

  // Kernel of the form, returned as a subspace of the carrier's ambient space.
  Subspace kernel(double eig_rel = Tolerances{}.eig_rel) const;

  // Restriction to a subspace of the carrier.
  HermitianForm restrictedTo(const Subspace& sub) const;

 private:
  Subspace carrier_;
  Mat matrix_;
};

// Builds the form v, w -> v^* S w restricted to the carrier, where S is a
// matrix on the ambient space.
HermitianForm formFromAmbient(const Subspace& carrier, const Mat& ambient_matrix,
                              double defect_rel = 1e-8);

}  // namespace sympla
