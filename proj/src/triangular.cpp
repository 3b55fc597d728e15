#include "sympla/triangular.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

namespace sympla {

namespace {

// Span of columns obtained by projecting orthonormal vectors: the natural
// scale is one, so directions below rank_rel against unit length are noise
// even when they dominate the projected matrix itself.
Subspace spanAgainstUnit(const Mat& cols, Field field, double rank_rel) {
  if (cols.cols() == 0 || cols.rows() == 0) {
    return Subspace::zero(cols.rows(), field);
  }
  if (field == Field::Real) {
    Eigen::JacobiSVD<RealMat> svd(cols.real(), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cutoff = rank_rel * std::max(1.0, sv(0));
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return Subspace(svd.matrixU().leftCols(rank).cast<Complex>(), field);
  }
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = rank_rel * std::max(1.0, sv(0));
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return Subspace(svd.matrixU().leftCols(rank), field);
}

void requireSplitting(const SymplecticSpace& sp, const SplitSample& sample,
                      double rank_rel) {
  if (!sp.isLagrangian(sample.X, rank_rel) || !sp.isLagrangian(sample.Y, rank_rel)) {
    throw SchemaError("triangle: X and Y must be Lagrangian");
  }
  if (directSumMargin(sample.X, sample.Y) < 1e-8) {
    throw SchemaError("triangle: X and Y must be transversal");
  }
  if (!sp.isLagrangian(sample.lambda, rank_rel) || !sp.isLagrangian(sample.mu, rank_rel)) {
    throw SchemaError("triangle: lambda and mu must be Lagrangian");
  }
}

}  // namespace

Subspace relationDomain(const Subspace& lambda, const Subspace& X, const Subspace& Y,
                        double rank_rel) {
  Index nx = X.dim(), ny = Y.dim();
  Mat frame(lambda.ambientDim(), nx + ny);
  frame << X.basis(), Y.basis();
  Mat coeff = frame.colPivHouseholderQr().solve(lambda.basis());
  return spanAgainstUnit(X.basis() * coeff.topRows(nx), lambda.field(), rank_rel);
}

HermitianForm triangleForm(const SymplecticSpace& sp, const SplitSample& sample,
                           double rank_rel) {
  requireSplitting(sp, sample, rank_rel);
  Index nx = sample.X.dim(), ny = sample.Y.dim();
  Mat frame(sp.dim(), nx + ny);
  frame << sample.X.basis(), sample.Y.basis();
  Eigen::ColPivHouseholderQR<Mat> frame_qr(frame);

  auto xTrace = [&](const Subspace& v) {
    Mat coeff = frame_qr.solve(v.basis());
    return Mat(sample.X.basis() * coeff.topRows(nx));
  };
  Mat px_l = xTrace(sample.lambda);
  Mat px_m = xTrace(sample.mu);
  Field field = sp.field();
  Subspace dom_l = spanAgainstUnit(px_l, field, rank_rel);
  Subspace dom_m = spanAgainstUnit(px_m, field, rank_rel);
  Subspace carrier = intersection(dom_l, dom_m, rank_rel);
  if (carrier.dim() == 0) {
    return HermitianForm(carrier, Mat::Zero(0, 0));
  }
  // For each carrier vector x pick lambda- and mu-representatives with X-part
  // x; their Y-parts give the relation values lambda(x) and mu(x). Any choice
  // of representative yields the same form because Y is Lagrangian. The
  // minimum-norm solve keeps the representatives bounded when the X-parts of
  // the basis columns are nearly dependent; each one-relation form is
  // Hermitian on its own, so symmetrize the two terms separately.
  auto relationTerm = [&](const Mat& px, const Subspace& rel) {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(px);
    cod.setThreshold(rank_rel);
    Mat c = cod.solve(carrier.basis());
    double residual = (px * c - carrier.basis()).norm();
    if (residual > 1e-8 * std::sqrt(double(carrier.dim()))) {
      throw NumericalError(
          "triangleForm: carrier escapes the relation domain numerically");
    }
    Mat term = carrier.basis().adjoint() * sp.form() * (rel.basis() * c);
    return HermitianForm(carrier, term).matrix();
  };
  Mat q = relationTerm(px_l, sample.lambda) - relationTerm(px_m, sample.mu);
  return HermitianForm(carrier, q);
}

TriangleIndexResult triangleIndex(const SymplecticSpace& sp,
                                  const std::vector<SplitSample>& samples,
                                  double rank_rel, double eig_rel) {
  if (samples.empty()) throw SchemaError("triangle: empty sample list");
  TriangleIndexResult out;
  std::vector<Inertia> inertias;
  Index trace_l = -1, trace_m = -1;
  for (const auto& sample : samples) {
    HermitianForm q = triangleForm(sp, sample, rank_rel);
    Inertia in = q.inertia(eig_rel);
    Subspace meet = intersection(sample.lambda, sample.mu, rank_rel);
    Index ab = intersection(meet, sample.Y, rank_rel).dim();
    out.nullities.push_back(meet.dim());
    out.kernel_dims.push_back(in.zero);
    out.ab_dims.push_back(ab);
    inertias.push_back(in);

    Index tl = intersection(sample.lambda, sample.Y, rank_rel).dim();
    Index tm = intersection(sample.mu, sample.Y, rank_rel).dim();
    if (trace_l < 0) {
      trace_l = tl;
      trace_m = tm;
    } else if (tl != trace_l || tm != trace_m) {
      throw SchemaError("triangle: the Y-traces of lambda and mu must have "
                        "constant dimension along the path");
    }
  }
  const Inertia& first = inertias.front();
  const Inertia& last = inertias.back();
  out.plus = static_cast<long>(out.ab_dims.front() - out.ab_dims.back() + last.positive -
                               first.positive);
  out.minus = static_cast<long>(-out.ab_dims.front() + out.ab_dims.back() -
                                last.negative + first.negative);
  return out;
}

DiagonalTraceIndices diagonalTraceIndices(const SymplecticSpace& sp, const Subspace& X,
                                          const Subspace& Y, const Subspace& lambda,
                                          const Subspace& mu, double rank_rel) {
  (void)sp;
  DiagonalTraceIndices out;
  out.a = fredholmIndexIn(intersection(lambda, X, rank_rel),
                          intersection(mu, X, rank_rel), X, rank_rel);
  out.b = fredholmIndexIn(intersection(lambda, Y, rank_rel),
                          intersection(mu, Y, rank_rel), Y, rank_rel);
  return out;
}

TriangleStructure triangleStructure(const SymplecticSpace& sp, const Subspace& X,
                                    const Subspace& Y, const Subspace& alpha,
                                    const Subspace& beta, double rank_rel) {
  SplitSample probe{0.0, X, Y, alpha, beta};
  requireSplitting(sp, probe, rank_rel);
  TriangleStructure out;
  out.W1 = intersection(alpha, Y, rank_rel);
  out.W2 = intersection(beta, Y, rank_rel);
  Subspace w1_ann = sp.annihilator(out.W1, rank_rel);
  Subspace w2_ann = sp.annihilator(out.W2, rank_rel);
  out.dom_alpha = intersection(w1_ann, X, rank_rel);
  out.dom_beta = intersection(w2_ann, X, rank_rel);
  out.gamma = sum(out.dom_alpha, out.W1, rank_rel);
  out.delta = sum(out.dom_beta, out.W2, rank_rel);

  out.y_codim = Y.dim() - sum(out.W1, out.W2, rank_rel).dim();
  out.x_meet = intersection(intersection(w1_ann, w2_ann, rank_rel), X, rank_rel).dim();
  out.trace_meet = intersection(out.W1, out.W2, rank_rel).dim();
  out.x_codim = X.dim() - sum(out.dom_alpha, out.dom_beta, rank_rel).dim();
  out.identities_hold = out.y_codim == out.x_meet && out.trace_meet == out.x_codim;
  out.domains_match =
      equalSubspaces(out.dom_alpha, relationDomain(alpha, X, Y, rank_rel)) &&
      equalSubspaces(out.dom_beta, relationDomain(beta, X, Y, rank_rel));
  out.osculating_lagrangian_pair =
      sp.isLagrangian(out.gamma) && sp.isLagrangian(out.delta);
  return out;
}

DiagonalMaslovResult maslovDiagonal(const SymplecticSpace& sp,
                                    const std::vector<SplitSample>& samples,
                                    double rank_rel) {
  if (samples.empty()) throw SchemaError("diagonal: empty sample list");
  DiagonalMaslovResult out;
  for (const auto& sample : samples) {
    requireSplitting(sp, sample, rank_rel);
    for (const Subspace* v : {&sample.lambda, &sample.mu}) {
      Index in_x = intersection(*v, sample.X, rank_rel).dim();
      Index in_y = intersection(*v, sample.Y, rank_rel).dim();
      if (in_x + in_y != v->dim()) {
        throw SchemaError("diagonal: lambda and mu must split along X + Y at "
                          "every sample");
      }
    }
    Subspace meet = intersection(sample.lambda, sample.mu, rank_rel);
    out.cap_dims.push_back(meet.dim());
    out.cap_x.push_back(intersection(meet, sample.X, rank_rel).dim());
    out.cap_y.push_back(intersection(meet, sample.Y, rank_rel).dim());
    DiagonalTraceIndices tr = diagonalTraceIndices(sp, sample.X, sample.Y,
                                                   sample.lambda, sample.mu, rank_rel);
    out.a.push_back(tr.a);
    out.b.push_back(tr.b);
  }
  Index drop = out.cap_dims.front() - out.cap_dims.back();
  if (drop % 2 != 0) {
    throw NumericalError("diagonal: odd intersection drop; the pair is not "
                         "diagonal at the stated tolerances");
  }
  out.plus = static_cast<long>(drop / 2);
  out.minus = -out.plus;
  out.plus_x = static_cast<long>(out.cap_x.front() - out.cap_x.back());
  out.plus_y = static_cast<long>(out.cap_y.front() - out.cap_y.back());
  return out;
}

Subspace lagToTriangle(const SymplecticSpace& sp, const Subspace& X, const Subspace& Y,
                       const Subspace& lambda, double t, double rank_rel) {
  if (!sp.isLagrangian(lambda, rank_rel)) {
    throw SchemaError("triangle: lambda must be Lagrangian");
  }
  Subspace trace = intersection(lambda, Y, rank_rel);
  Mat px = obliqueProjector(X, Y, rank_rel);
  Index d = sp.dim();
  Mat pt = px + t * (Mat::Identity(d, d) - px);
  Mat columns(d, lambda.dim() + trace.dim());
  columns << pt * lambda.basis(), trace.basis();
  return Subspace::fromColumns(columns, lambda.field(), rank_rel);
}

}  // namespace sympla
