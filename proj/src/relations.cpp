#include "sympla/relations.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace sympla {

namespace {

Subspace asComplex(const Subspace& v) { return Subspace(v.basis(), Field::Complex); }

double largestSingularValue(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

struct Stream {
  unsigned long long state;
  explicit Stream(unsigned long long seed) : state(seed + 0x9e3779b97f4a7c15ull) {}
  unsigned long long next() {
    unsigned long long z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0; }
  Vec direction(Index d) {
    Vec v(d);
    for (Index i = 0; i < d; ++i) v(i) = Complex(uniform(), uniform());
    double n = v.norm();
    return n > 0 ? Vec(v / n) : Vec(Vec::Unit(d, 0));
  }
};

}  // namespace

RelationSpace::RelationSpace(Subspace X, Subspace Y, Mat gram, double rank_rel)
    : x_(std::move(X)), y_(std::move(Y)), gram_(std::move(gram)) {
  Index d = gram_.rows();
  if (gram_.cols() != d || x_.ambientDim() != d || y_.ambientDim() != d) {
    throw SchemaError("relations: inconsistent ambient dimensions");
  }
  if ((gram_ - gram_.adjoint()).norm() > 1e-10 * std::max(1.0, gram_.norm())) {
    throw SchemaError("relations: the Gram matrix must be Hermitian");
  }
  gram_ = 0.5 * (gram_ + gram_.adjoint());
  Eigen::LLT<Mat> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw SchemaError("relations: the Gram matrix must be positive definite");
  }
  gram_chol_ = llt.matrixU();
  if (x_.dim() + y_.dim() != d || directSumMargin(x_, y_) < 1e-10) {
    throw SchemaError("relations: X and Y must be complementary");
  }
  proj_x_ = obliqueProjector(x_, y_, rank_rel);
}

RelationSpace RelationSpace::euclidean(Subspace X, Subspace Y, double rank_rel) {
  Index d = X.ambientDim();
  return RelationSpace(std::move(X), std::move(Y), Mat::Identity(d, d), rank_rel);
}

double RelationSpace::norm(const Vec& v) const { return (gram_chol_ * v).norm(); }

double RelationSpace::operatorNorm(const Mat& m) const {
  Mat transformed = gram_chol_ * m *
                    gram_chol_.triangularView<Eigen::Upper>().solve(
                        Mat::Identity(gram_.rows(), gram_.cols()));
  return largestSingularValue(transformed);
}

double RelationSpace::normP() const { return operatorNorm(proj_x_); }

double RelationSpace::normIMinusP() const {
  return operatorNorm(Mat::Identity(gram_.rows(), gram_.cols()) - proj_x_);
}

namespace {

// Orthonormal basis of U * V in the Euclidean metric of the transformed
// coordinates, where lengths agree with the Gram metric downstairs.
Subspace transformed(const Mat& chol, const Subspace& v, double rank_rel) {
  return Subspace::fromColumns(chol * v.basis(), Field::Complex, rank_rel);
}

}  // namespace

double RelationSpace::gapDelta(const Subspace& m, const Subspace& n) const {
  return sympla::gapDelta(transformed(gram_chol_, m, Tolerances{}.rank_rel),
                          transformed(gram_chol_, n, Tolerances{}.rank_rel));
}

double RelationSpace::gapHat(const Subspace& m, const Subspace& n) const {
  return std::max(gapDelta(m, n), gapDelta(n, m));
}

double RelationSpace::minimumGap(const Subspace& m, const Subspace& n,
                                 double rank_rel) const {
  return sympla::minimumGap(transformed(gram_chol_, m, rank_rel),
                            transformed(gram_chol_, n, rank_rel), rank_rel);
}

double RelationSpace::gammaXY(double rank_rel) const {
  return minimumGap(x_, y_, rank_rel);
}

Subspace RelationSpace::domainOf(const Subspace& m, double rank_rel) const {
  return Subspace::fromColumns(proj_x_ * m.basis(), Field::Complex, rank_rel);
}

Subspace RelationSpace::indeterminacyOf(const Subspace& m, double rank_rel) const {
  return intersection(asComplex(m), asComplex(y_), rank_rel);
}

namespace {

// The two relation functionals reduce to the same generalized eigenproblem
// with different numerators: on the reduced parameter space c (the orthogonal
// complement of ker(P Z) in the coefficient space of M),
//   sup |E c| / |P Z c| = sqrt(lambda_max(E^* E, (P Z)^* (P Z))).
double relationExtremum(const Mat& numerator, const Mat& pz_reduced) {
  if (pz_reduced.cols() == 0) return 0.0;
  Mat a = numerator.adjoint() * numerator;
  Mat b = pz_reduced.adjoint() * pz_reduced;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()),
                                                   0.5 * (b + b.adjoint()));
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

struct TransformedRelation {
  Mat z;        // orthonormal basis of the relation
  Mat reduce;   // columns spanning the complement of ker(P z)
  Mat pz;       // P z * reduce
  Mat offz;     // (I - P) z * reduce
  Mat pi0;      // orthogonal projector onto M cap Y
  Mat w0;       // orthonormal basis of M cap Y
};

TransformedRelation analyze(const Mat& chol, const Mat& proj, const Subspace& yspace,
                            const Subspace& m, double rank_rel) {
  TransformedRelation out;
  Index d = chol.rows();
  Mat chol_inv =
      chol.triangularView<Eigen::Upper>().solve(Mat::Identity(d, d));
  Mat proj_t = chol * proj * chol_inv;
  Subspace mt = transformed(chol, m, rank_rel);
  Subspace yt = transformed(chol, yspace, rank_rel);
  Subspace m0 = intersection(mt, yt, rank_rel);
  out.z = mt.basis();
  out.w0 = m0.basis();
  out.pi0 = m0.projector();
  Mat pz_full = proj_t * out.z;
  if (pz_full.cols() == 0) {
    out.reduce = Mat(out.z.cols(), 0);
  } else {
    Eigen::JacobiSVD<Mat> svd(pz_full, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = rank_rel * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    out.reduce = svd.matrixV().leftCols(rank);
  }
  out.pz = pz_full * out.reduce;
  out.offz = (Mat::Identity(d, d) - proj_t) * out.z * out.reduce;
  return out;
}

}  // namespace

double RelationSpace::alphaOf(const Subspace& m, double rank_rel) const {
  TransformedRelation rel = analyze(gram_chol_, proj_x_, y_, m, rank_rel);
  Index d = gram_.rows();
  Mat numerator = (Mat::Identity(d, d) - rel.pi0) * (rel.pz - rel.offz);
  return relationExtremum(numerator, rel.pz);
}

double RelationSpace::relationNorm(const Subspace& m, double rank_rel) const {
  TransformedRelation rel = analyze(gram_chol_, proj_x_, y_, m, rank_rel);
  Index d = gram_.rows();
  Mat numerator = (Mat::Identity(d, d) - rel.pi0) * rel.offz;
  return relationExtremum(numerator, rel.pz);
}

namespace {

// min |B alpha + g| subject to |alpha| <= radius (trust-region subproblem,
// exact through the SVD of B and bisection on the secular equation).
double constrainedResidual(const Mat& b, const Vec& g, double radius) {
  if (b.cols() == 0) return g.norm();
  Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Vec ug = svd.matrixU().adjoint() * g;
  Index r = sv.size();
  auto alphaNorm = [&](double lambda) {
    double total = 0.0;
    for (Index i = 0; i < r; ++i) {
      double denom = sv(i) * sv(i) + lambda;
      if (denom <= 0) continue;
      double term = sv(i) * std::abs(ug(i)) / denom;
      total += term * term;
    }
    return std::sqrt(total);
  };
  double tiny = 1e-14 * std::max(1.0, sv(0));
  double lambda = 0.0;
  // Unconstrained (pseudo-inverse) solution first.
  double base = 0.0;
  for (Index i = 0; i < r; ++i) {
    if (sv(i) > tiny) {
      double term = std::abs(ug(i)) / sv(i);
      base += term * term;
    }
  }
  if (std::sqrt(base) > radius) {
    double lo = 0.0, hi = std::max(1.0, sv(0) * g.norm() / std::max(radius, 1e-300));
    while (alphaNorm(hi) > radius) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (alphaNorm(mid) > radius ? lo : hi) = mid;
    }
    lambda = 0.5 * (lo + hi);
  }
  Vec alpha = Vec::Zero(b.cols());
  for (Index i = 0; i < r; ++i) {
    double denom = sv(i) * sv(i) + lambda;
    double factor = (lambda == 0.0 && sv(i) <= tiny) ? 0.0
                    : (denom > 0 ? sv(i) / denom : 0.0);
    alpha -= svd.matrixV().col(i) * (factor * ug(i));
  }
  return (b * alpha + g).norm();
}

struct FiberData {
  Mat basis;   // orthonormal basis of the relation (transformed coordinates)
  Mat pz;      // P basis
  Mat dom;     // orthonormal basis of the domain
  Mat w0;      // orthonormal basis of M cap Y
  Mat pi0;     // projector onto M cap Y
};

FiberData fiberData(const Mat& chol, const Mat& proj_t, const Subspace& yt,
                    const Subspace& m, double rank_rel) {
  FiberData out;
  Subspace mt = transformed(chol, m, rank_rel);
  Subspace m0 = intersection(mt, yt, rank_rel);
  out.basis = mt.basis();
  out.pz = proj_t * out.basis;
  out.dom = Subspace::fromColumns(out.pz, Field::Complex, rank_rel).basis();
  out.w0 = m0.basis();
  out.pi0 = m0.projector();
  return out;
}

// Minimal-norm fiber representative over x: solve P z c = x and remove the
// M cap Y component.
Vec fiberPoint(const FiberData& f, const Mat& proj_t, const Vec& x) {
  Vec c = f.pz.colPivHouseholderQr().solve(x);
  Vec lifted = f.basis * c;
  Vec v = lifted - proj_t * lifted;
  return v - f.pi0 * v;
}

}  // namespace

double RelationSpace::bLowerBound(const Subspace& m, const Subspace& n, double s,
                                  double t, int starts, unsigned long long seed,
                                  double rank_rel) const {
  Index d = gram_.rows();
  Mat chol_inv =
      gram_chol_.triangularView<Eigen::Upper>().solve(Mat::Identity(d, d));
  Mat proj_t = gram_chol_ * proj_x_ * chol_inv;
  Subspace yt = transformed(gram_chol_, y_, rank_rel);
  FiberData fm = fiberData(gram_chol_, proj_t, yt, m, rank_rel);
  FiberData fn = fiberData(gram_chol_, proj_t, yt, n, rank_rel);
  Index dm = fm.dom.cols();
  Index dn = fn.dom.cols();
  if (dm == 0) return 0.0;

  Index dy = fn.w0.cols() > 0 ? fn.w0.rows() : d;
  Mat eye = Mat::Identity(dy, dy);
  Mat off_n0 = eye - fn.pi0;
  Mat b_mat = off_n0 * fm.w0;

  // Objective over x1 = DM c (unit) and x2 = DN e with |x2 - x1| <= s.
  auto objective = [&](const Vec& c, const Vec& e) {
    Vec x1 = fm.dom * c;
    Vec x2 = fn.dom * e;
    Vec v1 = fiberPoint(fm, proj_t, x1);
    double radius_sq = t * t - v1.squaredNorm();
    if (radius_sq < 0) return -1.0;  // infeasible; t chosen above |M| avoids it
    Vec v2 = fiberPoint(fn, proj_t, x2);
    Vec g = off_n0 * (v1 - v2);
    return constrainedResidual(b_mat, g, std::sqrt(radius_sq));
  };

  // Exact projection of e onto the constraint set for a fixed unit x1.
  auto projectE = [&](const Vec& x1, Vec e) {
    Vec p = fn.dom.adjoint() * x1;
    double rest = (x1 - fn.dom * p).squaredNorm();
    double rho_sq = s * s - rest;
    if (rho_sq <= 0) return p;  // s above the domain gap keeps this positive
    double rho = std::sqrt(rho_sq);
    Vec diff = e - p;
    double len = diff.norm();
    if (len > rho) e = p + diff * (rho / len);
    return e;
  };

  Stream stream(seed ^ 0xb10cbeefull);
  double best = 0.0;
  auto consider = [&](const Vec& c, const Vec& e) {
    double value = objective(c, e);
    if (value > best) best = value;
  };

  // Dense seeded sampling.
  int samples = std::max(128, 8 * starts);
  for (int i = 0; i < samples; ++i) {
    Vec c = stream.direction(dm);
    Vec e = dn > 0 ? projectE(fm.dom * c,
                              Vec(fn.dom.adjoint() * (fm.dom * c) +
                                  0.9 * s * stream.direction(std::max<Index>(dn, 1))))
                   : Vec(Vec::Zero(0));
    consider(c, e);
  }

  // Projected ascent with a numerical gradient on the real parametrization.
  int dim_c = 2 * static_cast<int>(dm);
  int dim_e = 2 * static_cast<int>(dn);
  auto unpack = [&](const Eigen::VectorXd& u, Vec* c, Vec* e) {
    c->resize(dm);
    for (Index i = 0; i < dm; ++i) (*c)(i) = Complex(u(2 * i), u(2 * i + 1));
    double cn = c->norm();
    if (cn > 0) *c /= cn;
    e->resize(dn);
    for (Index i = 0; i < dn; ++i) {
      (*e)(i) = Complex(u(dim_c + 2 * i), u(dim_c + 2 * i + 1));
    }
    *e = projectE(fm.dom * *c, *e);
  };
  auto evalPacked = [&](const Eigen::VectorXd& u) {
    Vec c, e;
    unpack(u, &c, &e);
    return objective(c, e);
  };
  for (int start = 0; start < starts; ++start) {
    Eigen::VectorXd u(dim_c + dim_e);
    Vec c0 = stream.direction(dm);
    Vec e0 = dn > 0 ? projectE(fm.dom * c0, Vec(fn.dom.adjoint() * (fm.dom * c0)))
                    : Vec(Vec::Zero(0));
    for (Index i = 0; i < dm; ++i) {
      u(2 * i) = c0(i).real();
      u(2 * i + 1) = c0(i).imag();
    }
    for (Index i = 0; i < dn; ++i) {
      u(dim_c + 2 * i) = e0(i).real();
      u(dim_c + 2 * i + 1) = e0(i).imag();
    }
    double step = 0.2;
    double current = evalPacked(u);
    for (int it = 0; it < 60 && step > 1e-6; ++it) {
      Eigen::VectorXd grad(u.size());
      const double fd = 1e-5;
      for (int i = 0; i < u.size(); ++i) {
        Eigen::VectorXd up = u, dn_ = u;
        up(i) += fd;
        dn_(i) -= fd;
        grad(i) = (evalPacked(up) - evalPacked(dn_)) / (2 * fd);
      }
      double gn = grad.norm();
      if (gn < 1e-12) break;
      Eigen::VectorXd trial = u + (step / gn) * grad;
      double value = evalPacked(trial);
      if (value > current) {
        u = trial;
        current = value;
      } else {
        step *= 0.5;
      }
    }
    if (current > best) best = current;
  }
  return best;
}

std::vector<InequalityCheck> relationInequalities(const RelationSpace& rs,
                                                  const Subspace& m, const Subspace& n,
                                                  double s, double t, int starts,
                                                  unsigned long long seed,
                                                  double rank_rel) {
  Subspace dom_m = rs.domainOf(m, rank_rel);
  Subspace dom_n = rs.domainOf(n, rank_rel);
  Subspace m0 = rs.indeterminacyOf(m, rank_rel);
  Subspace n0 = rs.indeterminacyOf(n, rank_rel);
  double alpha_m = rs.alphaOf(m, rank_rel);
  double alpha_n = rs.alphaOf(n, rank_rel);
  double norm_m = rs.relationNorm(m, rank_rel);
  double norm_n = rs.relationNorm(n, rank_rel);
  double delta_mn = rs.gapDelta(m, n);
  double delta_m0n0 = rs.gapDelta(m0, n0);
  double delta_n0m0 = rs.gapDelta(n0, m0);
  double delta_dom = rs.gapDelta(dom_m, dom_n);
  double gamma_xy = rs.gammaXY(rank_rel);
  double norm_p = rs.normP();
  double norm_ip = rs.normIMinusP();
  if (s <= delta_dom) {
    throw SchemaError("relations: s must exceed the domain gap");
  }
  if (t <= norm_m) {
    throw SchemaError("relations: t must exceed the relation norm");
  }
  double b_hat = rs.bLowerBound(m, n, s, t, starts, seed, rank_rel);

  std::vector<InequalityCheck> checks;
  checks.push_back({"alpha-dominates-domain-gap", rs.gapDelta(dom_m, rs.Y()), alpha_m});
  checks.push_back(
      {"domain-gap-dominates-minimum-gap", gamma_xy, rs.gapDelta(dom_m, rs.Y())});
  checks.push_back({"alpha-norm-gap-at-most-one", std::abs(alpha_m - norm_m), 1.0});
  checks.push_back({"minimum-gap-lower-bound",
                    alpha_m > 0 ? gamma_xy / alpha_m : 0.0,
                    rs.minimumGap(m, rs.Y(), rank_rel)});
  double shrink = (1.0 - delta_n0m0) / (1.0 + delta_n0m0);
  checks.push_back({"alpha-continuity",
                    (shrink * alpha_m - rs.eta() * (2.0 + alpha_m) * delta_mn) /
                        (1.0 + norm_p * (2.0 + alpha_m) * delta_mn),
                    alpha_n});
  checks.push_back({"norm-continuity",
                    (shrink * norm_m - norm_ip * (1.0 + norm_m) * delta_mn) /
                        (1.0 + norm_p * (1.0 + norm_m) * delta_mn),
                    norm_n});
  double criterion = s * norm_p + b_hat * norm_p + delta_m0n0 * (norm_ip + t * norm_p);
  checks.push_back({"gap-criterion", delta_mn, std::max(criterion, delta_m0n0)});
  checks.push_back({"b-continuity-bound", b_hat,
                    (t + 1.0) * (norm_ip + norm_p * norm_n) * delta_mn + s * norm_n});
  return checks;
}

InequalityCheck operatorImageGapBound(const Mat& a, const Mat& b, const Subspace& m,
                                      const Subspace& n, double rank_rel) {
  Subspace am = Subspace::fromColumns(a * m.basis(), Field::Complex, rank_rel);
  Subspace bn = Subspace::fromColumns(b * n.basis(), Field::Complex, rank_rel);
  double norm_c = 0.0;
  if (m.dim() > 0) {
    Eigen::JacobiSVD<Mat> svd(a * m.basis());
    double smallest = svd.singularValues()(svd.singularValues().size() - 1);
    if (smallest < 1e-12) {
      throw SchemaError("relations: the operator must be injective on M");
    }
    norm_c = 1.0 / smallest;
  }
  InequalityCheck out;
  out.name = "operator-image-gap";
  out.lhs = sympla::gapDelta(am, bn);
  out.rhs = norm_c * (largestSingularValue(a - b) +
                      largestSingularValue(b) * sympla::gapDelta(asComplex(m), asComplex(n)));
  return out;
}

}  // namespace sympla
