#include "sympla/quadform.hpp"

#include <Eigen/Eigenvalues>

namespace sympla {

Inertia matrixInertia(const Mat& hermitian, double eig_rel) {
  Inertia out;
  if (hermitian.rows() == 0) return out;
  Mat sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  double cutoff = eig_rel * std::max(1.0, radius);
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) {
      ++out.positive;
    } else if (ev(i) < -cutoff) {
      ++out.negative;
    } else {
      ++out.zero;
    }
  }
  return out;
}

HermitianForm::HermitianForm(Subspace carrier, Mat matrix, double defect_rel)
    : carrier_(std::move(carrier)) {
  if (matrix.rows() != carrier_.dim() || matrix.cols() != carrier_.dim()) {
    throw SchemaError("HermitianForm: matrix size does not match the carrier");
  }
  double scale = std::max(1.0, matrix.norm());
  double defect = (matrix - matrix.adjoint()).norm();
  if (defect > defect_rel * scale) {
    throw NumericalError("HermitianForm: matrix is not Hermitian within tolerance");
  }
  matrix_ = 0.5 * (matrix + matrix.adjoint());
}

Inertia HermitianForm::inertia(double eig_rel) const {
  return matrixInertia(matrix_, eig_rel);
}

Index HermitianForm::positiveIndex(double eig_rel) const {
  return inertia(eig_rel).positive;
}

Index HermitianForm::negativeIndex(double eig_rel) const {
  return inertia(eig_rel).negative;
}

Index HermitianForm::nullity(double eig_rel) const { return inertia(eig_rel).zero; }

Subspace HermitianForm::kernel(double eig_rel) const {
  if (matrix_.rows() == 0) {
    return Subspace::zero(carrier_.ambientDim(), carrier_.field());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix_);
  const auto& ev = es.eigenvalues();
  double radius = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  double cutoff = eig_rel * std::max(1.0, radius);
  std::vector<Index> keep;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= cutoff) keep.push_back(i);
  }
  Mat coords(matrix_.rows(), static_cast<Index>(keep.size()));
  for (Index j = 0; j < coords.cols(); ++j) {
    coords.col(j) = es.eigenvectors().col(keep[static_cast<size_t>(j)]);
  }
  // Eigenvectors are orthonormal in carrier coordinates, so mapping through
  // the orthonormal carrier basis keeps orthonormality.
  return Subspace::fromColumns(carrier_.basis() * coords, carrier_.field());
}

HermitianForm HermitianForm::restrictedTo(const Subspace& sub) const {
  if (!containsSubspace(carrier_, sub)) {
    throw SchemaError("HermitianForm::restrictedTo: subspace is not inside the carrier");
  }
  Mat coords = carrier_.basis().adjoint() * sub.basis();
  return HermitianForm(sub, coords.adjoint() * matrix_ * coords);
}

HermitianForm formFromAmbient(const Subspace& carrier, const Mat& ambient_matrix,
                              double defect_rel) {
  if (ambient_matrix.rows() != carrier.ambientDim() ||
      ambient_matrix.cols() != carrier.ambientDim()) {
    throw SchemaError("formFromAmbient: matrix size does not match the ambient space");
  }
  Mat q = carrier.basis().adjoint() * ambient_matrix * carrier.basis();
  return HermitianForm(carrier, q, defect_rel);
}

}  // namespace sympla
