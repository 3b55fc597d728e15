#include "sympla/subspace.hpp"

#include <Eigen/SVD>

namespace sympla {

namespace {

// Orthonormal basis of the column span, with rank decided at rank_rel * s_max.
// Real-tagged data is factored in real arithmetic so bases stay exactly real.
Mat orthonormalSpan(const Mat& columns, Field field, double rank_rel) {
  if (columns.cols() == 0 || columns.rows() == 0) {
    return Mat(columns.rows(), 0);
  }
  if (field == Field::Real) {
    Eigen::JacobiSVD<RealMat> svd(columns.real(), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cutoff = sv.size() > 0 ? rank_rel * sv(0) : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
    return svd.matrixU().leftCols(rank).cast<Complex>();
  }
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() > 0 ? rank_rel * sv(0) : 0.0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

void requireSameAmbient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambientDim() != b.ambientDim()) {
    throw SchemaError(std::string(op) + ": ambient dimensions differ");
  }
}

Field joinFields(const Subspace& a, const Subspace& b) {
  return (a.field() == Field::Complex || b.field() == Field::Complex)
             ? Field::Complex
             : Field::Real;
}

}  // namespace

Subspace::Subspace(Mat orthonormal_basis, Field field)
    : basis_(std::move(orthonormal_basis)), field_(field) {}

Subspace Subspace::fromColumns(const Mat& columns, Field field, double rank_rel) {
  return Subspace(orthonormalSpan(columns, field, rank_rel), field);
}

Subspace Subspace::zero(Index ambient_dim, Field field) {
  return Subspace(Mat(ambient_dim, 0), field);
}

Subspace Subspace::full(Index ambient_dim, Field field) {
  return Subspace(Mat::Identity(ambient_dim, ambient_dim), field);
}

Mat Subspace::projector() const { return basis_ * basis_.adjoint(); }

bool Subspace::contains(const Vec& v, double tol) const {
  double norm = v.norm();
  if (norm == 0.0) return true;
  return (v - basis_ * (basis_.adjoint() * v)).norm() <= tol * norm;
}

Subspace sum(const Subspace& a, const Subspace& b, double rank_rel) {
  requireSameAmbient(a, b, "sum");
  Mat joined(a.ambientDim(), a.dim() + b.dim());
  joined << a.basis(), b.basis();
  return Subspace::fromColumns(joined, joinFields(a, b), rank_rel);
}

Subspace orthogonalComplement(const Subspace& a, double rank_rel) {
  // Full SVD of the basis: the left singular vectors beyond the rank span the
  // complement. For a zero subspace that is the whole space.
  if (a.dim() == 0) return Subspace::full(a.ambientDim(), a.field());
  if (a.field() == Field::Real) {
    Eigen::JacobiSVD<RealMat> svd(a.basis().real(), Eigen::ComputeFullU);
    return Subspace(svd.matrixU().rightCols(a.ambientDim() - a.dim()).cast<Complex>(),
                    a.field());
  }
  Eigen::JacobiSVD<Mat> svd(a.basis(), Eigen::ComputeFullU);
  (void)rank_rel;
  return Subspace(svd.matrixU().rightCols(a.ambientDim() - a.dim()), a.field());
}

Subspace intersection(const Subspace& a, const Subspace& b, double rank_rel) {
  requireSameAmbient(a, b, "intersection");
  Subspace oc = sum(orthogonalComplement(a, rank_rel), orthogonalComplement(b, rank_rel),
                    rank_rel);
  return orthogonalComplement(oc, rank_rel);
}

bool containsSubspace(const Subspace& outer, const Subspace& inner, double tol) {
  requireSameAmbient(outer, inner, "containsSubspace");
  if (inner.dim() == 0) return true;
  if (inner.dim() > outer.dim()) return false;
  return gapDelta(inner, outer) <= tol;
}

bool equalSubspaces(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && containsSubspace(a, b, tol) && containsSubspace(b, a, tol);
}

long fredholmIndex(const Subspace& a, const Subspace& b, double rank_rel) {
  requireSameAmbient(a, b, "fredholmIndex");
  Index cap = intersection(a, b, rank_rel).dim();
  Index span = sum(a, b, rank_rel).dim();
  return static_cast<long>(cap) - static_cast<long>(a.ambientDim() - span);
}

long fredholmIndexIn(const Subspace& a, const Subspace& b, const Subspace& ambient,
                     double rank_rel) {
  requireSameAmbient(a, ambient, "fredholmIndexIn");
  if (!containsSubspace(ambient, a) || !containsSubspace(ambient, b)) {
    throw SchemaError("fredholmIndexIn: arguments not contained in the ambient subspace");
  }
  Index cap = intersection(a, b, rank_rel).dim();
  Index span = sum(a, b, rank_rel).dim();
  return static_cast<long>(cap) - static_cast<long>(ambient.dim() - span);
}

long relativeDimension(const Subspace& a, const Subspace& b, double rank_rel) {
  requireSameAmbient(a, b, "relativeDimension");
  Index cap = intersection(a, b, rank_rel).dim();
  return static_cast<long>(a.dim() - cap) - static_cast<long>(b.dim() - cap);
}

double gapDelta(const Subspace& a, const Subspace& b) {
  requireSameAmbient(a, b, "gapDelta");
  if (a.dim() == 0) return 0.0;
  // sup over unit u in a of dist(u, b) = largest singular value of
  // (I - P_b) restricted to a.
  Mat rest = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  Eigen::JacobiSVD<Mat> svd(rest);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double gapHat(const Subspace& a, const Subspace& b) {
  return std::max(gapDelta(a, b), gapDelta(b, a));
}

double minimumGap(const Subspace& a, const Subspace& b, double rank_rel) {
  requireSameAmbient(a, b, "minimumGap");
  // Unit vectors of a orthogonal to a cap b realize the infimum; their
  // distance to b is sqrt(1 - cos^2) with the largest principal cosine.
  Subspace cap = intersection(a, b, rank_rel);
  Subspace a1 = intersection(a, orthogonalComplement(cap, rank_rel), rank_rel);
  if (a1.dim() == 0) return 1.0;  // a contained in b
  if (b.dim() == 0) return 1.0;   // distances to b equal the norms
  Eigen::JacobiSVD<Mat> svd(b.basis().adjoint() * a1.basis());
  double cosmax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  cosmax = std::min(cosmax, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - cosmax * cosmax));
}

double directSumMargin(const Subspace& a, const Subspace& b) {
  requireSameAmbient(a, b, "directSumMargin");
  if (a.dim() + b.dim() == 0) return 1.0;
  Mat joined(a.ambientDim(), a.dim() + b.dim());
  joined << a.basis(), b.basis();
  if (joined.cols() > joined.rows()) return 0.0;
  Eigen::JacobiSVD<Mat> svd(joined);
  return svd.singularValues().minCoeff();
}

Mat obliqueProjector(const Subspace& onto, const Subspace& along, double rank_rel) {
  requireSameAmbient(onto, along, "obliqueProjector");
  Index d = onto.ambientDim();
  if (onto.dim() + along.dim() != d) {
    throw SchemaError("obliqueProjector: subspaces do not form a splitting");
  }
  Mat frame(d, d);
  frame << onto.basis(), along.basis();
  Eigen::PartialPivLU<Mat> lu(frame);
  double margin = directSumMargin(onto, along);
  if (margin <= rank_rel) {
    throw NumericalError("obliqueProjector: splitting is numerically degenerate");
  }
  Mat sel = Mat::Zero(d, d);
  sel.topLeftCorner(onto.dim(), onto.dim()) =
      Mat::Identity(onto.dim(), onto.dim());
  return frame * sel * lu.inverse();
}

}  // namespace sympla
