#include "sympla/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace sympla {

namespace {

// SplitMix64 stream; used only to build deterministic perturbation directions.
struct Stream {
  unsigned long long state;
  explicit Stream(unsigned long long seed) : state(seed + 0x9e3779b97f4a7c15ull) {}
  unsigned long long next() {
    unsigned long long z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() {  // in (-1, 1)
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }
};

Mat hermitianDirection(Index n, Field field, Stream& stream) {
  Mat h(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = Complex(stream.uniform(), 0.0);
    for (Index j = i + 1; j < n; ++j) {
      Complex v(stream.uniform(),
                field == Field::Complex ? stream.uniform() : 0.0);
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  double norm = h.norm();
  if (norm > 0) h /= norm;
  return h;
}

}  // namespace

SymplecticSpace SymplecticSpace::standard(Index n, Field field) {
  SymplecticSpace sp;
  sp.omega_ = Mat::Zero(2 * n, 2 * n);
  sp.omega_.topRightCorner(n, n) = -Mat::Identity(n, n);
  sp.omega_.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  sp.field_ = field;
  return sp;
}

SymplecticSpace SymplecticSpace::fromForm(Mat omega, Field field, double symplectic_rel) {
  if (omega.rows() != omega.cols()) {
    throw SchemaError("SymplecticSpace: form matrix must be square");
  }
  if (field == Field::Real && omega.imag().norm() > 0) {
    throw SchemaError("SymplecticSpace: real space with a complex form matrix");
  }
  double scale = std::max(1.0, omega.norm());
  if ((omega + omega.adjoint()).norm() > symplectic_rel * scale) {
    throw SchemaError("SymplecticSpace: form is not skew-Hermitian");
  }
  if (omega.rows() > 0) {
    Eigen::JacobiSVD<Mat> svd(omega);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= symplectic_rel * sv(0)) {
      throw SchemaError("SymplecticSpace: form is degenerate");
    }
  }
  SymplecticSpace sp;
  sp.omega_ = 0.5 * (omega - omega.adjoint());
  sp.field_ = field;
  return sp;
}

Complex SymplecticSpace::eval(const Vec& x, const Vec& y) const {
  return (x.adjoint() * omega_ * y)(0, 0);
}

Subspace SymplecticSpace::annihilator(const Subspace& v, double rank_rel) const {
  // omega(x, v) = 0 for all v is x orthogonal to Omega v in the Euclidean
  // sense, so the annihilator is the orthogonal complement of Omega V.
  Subspace image = Subspace::fromColumns(omega_ * v.basis(), v.field(), rank_rel);
  return orthogonalComplement(image, rank_rel);
}

bool SymplecticSpace::isIsotropic(const Subspace& v, double tol) const {
  if (v.dim() == 0) return true;
  double defect = (v.basis().adjoint() * omega_ * v.basis()).norm();
  return defect <= tol * std::max(1.0, omega_.norm());
}

bool SymplecticSpace::isCoisotropic(const Subspace& v, double tol, double rank_rel) const {
  return containsSubspace(v, annihilator(v, rank_rel), tol);
}

bool SymplecticSpace::isLagrangian(const Subspace& v, double tol) const {
  return 2 * v.dim() == dim() && isIsotropic(v, tol);
}

bool SymplecticSpace::isSymplecticSubspace(const Subspace& v, double rank_rel) const {
  if (v.dim() == 0) return true;
  Mat restricted = v.basis().adjoint() * omega_ * v.basis();
  Eigen::JacobiSVD<Mat> svd(restricted);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1) > rank_rel * std::max(1.0, sv(0));
}

Subspace SymplecticSpace::lagrangianComplement(const Subspace& lambda,
                                               double rank_rel) const {
  if (2 * lambda.dim() != dim() || !isIsotropic(lambda)) {
    throw SchemaError("lagrangianComplement: argument is not Lagrangian");
  }
  const Mat& L = lambda.basis();
  Mat G = L.adjoint() * omega_;  // n x d, full row rank
  Mat F0 = G.adjoint() * (G * G.adjoint()).partialPivLu().inverse();
  Mat S = F0.adjoint() * omega_ * F0;  // skew-Hermitian residual
  Mat F = F0 + 0.5 * L * S;            // now isotropic, still dual to L
  return Subspace::fromColumns(F, lambda.field(), rank_rel);
}

namespace {

// Dual frame F with L^* Omega F = I and span(F) Lagrangian; kept
// unnormalized so that the graph shifts F + L T stay Lagrangian for
// Hermitian T.
Mat dualFrame(const Mat& omega, const Mat& L) {
  Mat G = L.adjoint() * omega;
  Mat F0 = G.adjoint() * (G * G.adjoint()).partialPivLu().inverse();
  Mat S = F0.adjoint() * omega * F0;
  return F0 + 0.5 * L * S;
}

}  // namespace

Subspace SymplecticSpace::commonTransversal(const Subspace& lambda, const Subspace& mu,
                                            unsigned long long seed,
                                            double margin_floor) const {
  return commonTransversal4(lambda, mu, lambda, mu, seed, margin_floor);
}

Subspace SymplecticSpace::commonTransversal4(const Subspace& l0, const Subspace& m0,
                                             const Subspace& l1, const Subspace& m1,
                                             unsigned long long seed,
                                             double margin_floor) const {
  if (!isLagrangian(l0) || !isLagrangian(m0)) {
    throw SchemaError("commonTransversal: arguments are not Lagrangian");
  }
  Index n = dim() / 2;
  const Mat& L = l0.basis();
  Mat F = dualFrame(omega_, L);

  // Candidate shift directions: fixed patterns first, then seeded ones.
  std::vector<Mat> directions;
  directions.push_back(Mat::Identity(n, n));
  Mat ramp = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) ramp(i, i) = Complex(double(i + 1) / double(n), 0.0);
  directions.push_back(ramp);
  Stream stream(seed ^ 0x5ca1ab1eull);
  for (int i = 0; i < 6; ++i) directions.push_back(hermitianDirection(n, field_, stream));

  const double scales[] = {0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.25, -0.25};
  double best_margin = -1.0;
  Subspace best;
  for (double scale : scales) {
    for (size_t di = 0; di < directions.size(); ++di) {
      Mat cand = F + L * (scale * directions[di]);
      Subspace w = Subspace::fromColumns(cand, l0.field());
      double margin = std::min(std::min(directSumMargin(w, l0), directSumMargin(w, m0)),
                               std::min(directSumMargin(w, l1), directSumMargin(w, m1)));
      if (margin > best_margin) {
        best_margin = margin;
        best = w;
      }
      if (scale == 0.0) break;  // the zero shift is direction-independent
    }
    if (best_margin >= 0.05) break;
  }
  if (best_margin < margin_floor) {
    throw NumericalError("commonTransversal: no Lagrangian transversal found within budget");
  }
  return best;
}

SymplecticSpace::Reduction SymplecticSpace::reduceBy(const Subspace& w,
                                                     double rank_rel) const {
  if (!isCoisotropic(w)) {
    throw SchemaError("reduceBy: subspace is not coisotropic");
  }
  Reduction red;
  red.W = w;
  red.Womega = annihilator(w, rank_rel);
  Subspace section =
      intersection(w, orthogonalComplement(red.Womega, rank_rel), rank_rel);
  red.section = section.basis();
  Mat reduced_form = red.section.adjoint() * omega_ * red.section;
  red.reduced = section.dim() == 0
                    ? SymplecticSpace::fromForm(Mat(0, 0), field_)
                    : SymplecticSpace::fromForm(reduced_form, field_);
  return red;
}

SymplecticSpace::Reduction SymplecticSpace::reduceByIsotropic(const Subspace& w,
                                                              double rank_rel) const {
  if (!isIsotropic(w)) {
    throw SchemaError("reduceByIsotropic: subspace is not isotropic");
  }
  return reduceBy(annihilator(w, rank_rel), rank_rel);
}

Subspace SymplecticSpace::reduceSubspace(const Reduction& red, const Subspace& v,
                                         double rank_rel) const {
  Subspace numerator = sum(intersection(v, red.W, rank_rel), red.Womega, rank_rel);
  Index r = red.section.cols();
  Index z = red.Womega.dim();
  Mat frame(dim(), r + z);
  frame << red.section, red.Womega.basis();
  // Every numerator vector lies in W = section + W^omega; its section
  // coordinates represent the class modulo W^omega.
  Mat coords = frame.colPivHouseholderQr().solve(numerator.basis());
  return Subspace::fromColumns(coords.topRows(r), v.field(), rank_rel);
}

HermitianForm SymplecticSpace::tripleForm(const Subspace& alpha, const Subspace& beta,
                                          const Subspace& gamma, double rank_rel) const {
  if (!isIsotropic(alpha) || !isIsotropic(beta)) {
    throw SchemaError("tripleForm: alpha and beta must be isotropic");
  }
  Subspace carrier = intersection(gamma, sum(alpha, beta, rank_rel), rank_rel);
  if (carrier.dim() == 0) {
    return HermitianForm(carrier, Mat(0, 0));
  }
  Mat joined(dim(), alpha.dim() + beta.dim());
  joined << alpha.basis(), beta.basis();
  Mat coeff = joined.colPivHouseholderQr().solve(carrier.basis());
  Mat xpart = alpha.basis() * coeff.topRows(alpha.dim());
  Mat ypart = carrier.basis() - xpart;
  Mat q = xpart.adjoint() * omega_ * ypart;
  // Hermitian exactly when the carrier is isotropic; the constructor checks.
  return HermitianForm(carrier, q);
}

double SymplecticSpace::symplecticDefect(const Mat& m) const {
  return (m.adjoint() * omega_ * m - omega_).norm() / std::max(1.0, omega_.norm());
}

bool SymplecticSpace::isSymplecticMatrix(const Mat& m, double symplectic_rel) const {
  return m.rows() == dim() && m.cols() == dim() && symplecticDefect(m) <= symplectic_rel;
}

SymplecticSpace SymplecticSpace::complexified() const {
  SymplecticSpace sp;
  sp.omega_ = omega_;
  sp.field_ = Field::Complex;
  return sp;
}

SymplecticSpace productSpace(const SymplecticSpace& s1, const SymplecticSpace& s2) {
  Index d1 = s1.dim(), d2 = s2.dim();
  Mat omega = Mat::Zero(d1 + d2, d1 + d2);
  omega.topLeftCorner(d1, d1) = -s1.form();
  omega.bottomRightCorner(d2, d2) = s2.form();
  Field field = (s1.field() == Field::Complex || s2.field() == Field::Complex)
                    ? Field::Complex
                    : Field::Real;
  return SymplecticSpace::fromForm(omega, field);
}

Subspace graphOf(const Mat& m, Field field, double rank_rel) {
  Mat cols(m.rows() + m.cols(), m.cols());
  cols.topRows(m.cols()) = Mat::Identity(m.cols(), m.cols());
  cols.bottomRows(m.rows()) = m;
  return Subspace::fromColumns(cols, field, rank_rel);
}

}  // namespace sympla
