#include "sympla/spgroup.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace sympla {

namespace {

constexpr double kUnitCircleTol = 1e-9;

void requireSymplectic(const SymplecticSpace& sp, const Mat& m, double symplectic_rel,
                       const char* where) {
  if (!sp.isSymplecticMatrix(m, symplectic_rel)) {
    throw SchemaError(std::string(where) + ": matrix is not symplectic within tolerance");
  }
}

// Orthonormal kernel basis of a square matrix, cutoff relative to sigma_max.
Mat kernelBasis(const Mat& t, double rank_rel) {
  if (t.rows() == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = rank_rel * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(t.cols() - rank);
}

Mat hermitize(const Mat& q, const char* where) {
  double scale = std::max(1.0, q.norm());
  if ((q - q.adjoint()).norm() > 1e-8 * scale) {
    throw NumericalError(std::string(where) + ": boundary form is not Hermitian");
  }
  return 0.5 * (q + q.adjoint());
}

Mat matrixPower(const Mat& a, int k) {
  Mat out = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

MaslovTypeResult maslovTypeIndex(const SymplecticSpace& sp,
                                 const std::vector<MatrixSample>& path,
                                 const std::vector<Subspace>& w,
                                 const MaslovOptions& opt) {
  if (path.empty()) throw SchemaError("maslov-type: empty path");
  if (w.size() != 1 && w.size() != path.size()) {
    throw SchemaError("maslov-type: W must hold one subspace or one per sample");
  }
  SymplecticSpace prod = productSpace(sp, sp);
  std::vector<PairSample> samples;
  samples.reserve(path.size());
  for (size_t i = 0; i < path.size(); ++i) {
    requireSymplectic(sp, path[i].m, opt.tol.symplectic_rel, "maslov-type");
    PairSample ps;
    ps.s = path[i].s;
    ps.lambda = graphOf(path[i].m, prod.field(), opt.tol.rank_rel);
    ps.mu = w.size() == 1 ? w[0] : w[i];
    samples.push_back(std::move(ps));
  }
  MaslovResult res = maslovIndex(prod, std::move(samples), nullptr, opt);
  MaslovTypeResult out;
  out.plus = res.plus;
  out.minus = res.minus;
  out.nu = std::move(res.nullities);
  out.runs = res.runs;
  return out;
}

MaslovTypeResult maslovTypeIndexAgainstMatrix(const SymplecticSpace& sp,
                                              const std::vector<MatrixSample>& path,
                                              const Mat& p, const MaslovOptions& opt) {
  requireSymplectic(sp, p, opt.tol.symplectic_rel, "maslov-type");
  SymplecticSpace prod = productSpace(sp, sp);
  return maslovTypeIndex(sp, path, {graphOf(p, prod.field(), opt.tol.rank_rel)}, opt);
}

MaslovTypeResult maslovTypeIndexAtUnitScalar(const SymplecticSpace& sp,
                                             const std::vector<MatrixSample>& path,
                                             Complex z, const MaslovOptions& opt) {
  if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol) {
    throw SchemaError("maslov-type: the scalar must lie on the unit circle");
  }
  SymplecticSpace spc = sp.complexified();
  Mat zi = z * Mat::Identity(sp.dim(), sp.dim());
  SymplecticSpace prod = productSpace(spc, spc);
  return maslovTypeIndex(spc, path, {graphOf(zi, prod.field(), opt.tol.rank_rel)}, opt);
}

Index eigenspaceDim(const Mat& m, Complex z, double rank_rel) {
  Mat t = m - z * Mat::Identity(m.rows(), m.cols());
  return static_cast<Index>(t.cols()) -
         Subspace::fromColumns(t, Field::Complex, rank_rel).dim();
}

BlockSplit splitBlocks(const SymplecticSpace& sp, const Mat& m, const Subspace& X,
                       const Subspace& Y) {
  Index nx = X.dim(), ny = Y.dim();
  if (nx + ny != sp.dim()) {
    throw SchemaError("splitBlocks: X and Y do not split the space");
  }
  Mat frame(sp.dim(), sp.dim());
  frame << X.basis(), Y.basis();
  Eigen::PartialPivLU<Mat> lu(frame);
  Mat mc = lu.solve(m * frame);
  BlockSplit out;
  out.A = mc.topLeftCorner(nx, nx);
  out.B = mc.topRightCorner(nx, ny);
  out.C = mc.bottomLeftCorner(ny, nx);
  out.D = mc.bottomRightCorner(ny, ny);
  out.pairing = X.basis().adjoint() * sp.form() * Y.basis();
  return out;
}

Subspace productLagrangianFromComponents(const SymplecticSpace& sp, const Subspace& X,
                                         const Subspace& Y, const Subspace& r1,
                                         const Subspace& r2, double rank_rel) {
  Index d = sp.dim();
  Index nx = X.dim(), ny = Y.dim();
  if (nx + ny != d) {
    throw SchemaError("productLagrangianFromComponents: X and Y do not split the space");
  }
  if (r1.ambientDim() != 2 * nx || r2.ambientDim() != 2 * ny) {
    throw SchemaError(
        "productLagrangianFromComponents: components must live in doubled X and Y "
        "coordinates");
  }
  Field field = sp.field();
  if (r1.field() == Field::Complex || r2.field() == Field::Complex) {
    field = Field::Complex;
  }
  Mat cols = Mat::Zero(2 * d, r1.dim() + r2.dim());
  for (Index j = 0; j < r1.dim(); ++j) {
    cols.col(j).head(d) = X.basis() * r1.basis().col(j).head(nx);
    cols.col(j).tail(d) = X.basis() * r1.basis().col(j).tail(nx);
  }
  for (Index j = 0; j < r2.dim(); ++j) {
    cols.col(r1.dim() + j).head(d) = Y.basis() * r2.basis().col(j).head(ny);
    cols.col(r1.dim() + j).tail(d) = Y.basis() * r2.basis().col(j).tail(ny);
  }
  return Subspace::fromColumns(cols, field, rank_rel);
}

namespace {

struct TriangularFormData {
  Mat gram;          // boundary form in the carrier coordinates
  Index carrier_dim = 0;
};

// Carrier {y : (y, D y) in R2} with the form conj(omega_XY(B y2, D y1)).
TriangularFormData upperBoundaryForm(const BlockSplit& blocks, const Subspace& r2,
                                     double rank_rel) {
  Index ny = blocks.D.rows();
  Subspace meet = intersection(graphOf(blocks.D, r2.field(), rank_rel), r2, rank_rel);
  Mat ypart = meet.basis().topRows(ny);
  TriangularFormData out;
  out.carrier_dim = meet.dim();
  out.gram = hermitize(
      ypart.adjoint() * blocks.D.adjoint() * blocks.pairing.adjoint() * blocks.B * ypart,
      "triangular upper");
  return out;
}

// Carrier {x : (x, A x) in R1} with the form omega_XY(A x1, C x2).
TriangularFormData lowerBoundaryForm(const BlockSplit& blocks, const Subspace& r1,
                                     double rank_rel) {
  Index nx = blocks.A.rows();
  Subspace meet = intersection(graphOf(blocks.A, r1.field(), rank_rel), r1, rank_rel);
  Mat xpart = meet.basis().topRows(nx);
  TriangularFormData out;
  out.carrier_dim = meet.dim();
  out.gram = hermitize(
      xpart.adjoint() * blocks.A.adjoint() * blocks.pairing * blocks.C * xpart,
      "triangular lower");
  return out;
}

void requireZeroBlock(const Mat& block, const Mat& m, const char* which) {
  if (block.norm() > 1e-10 * std::max(1.0, m.norm())) {
    throw SchemaError(std::string("triangular: the ") + which +
                      " block must vanish for this closed form");
  }
}

Index graphMeetDim(const Mat& op, const Subspace& r, double rank_rel) {
  return intersection(graphOf(op, r.field(), rank_rel), r, rank_rel).dim();
}

}  // namespace

TriangularIndexResult triangularMaslovTypeUpper(const SymplecticSpace& sp,
                                                const std::vector<TriangularSample>& path,
                                                const Subspace& X, const Subspace& Y,
                                                const Tolerances& tol) {
  if (path.empty()) throw SchemaError("triangular: empty path");
  TriangularIndexResult out;
  std::vector<Inertia> inertias;
  for (const auto& sample : path) {
    requireSymplectic(sp, sample.m, tol.symplectic_rel, "triangular");
    BlockSplit blocks = splitBlocks(sp, sample.m, X, Y);
    requireZeroBlock(blocks.C, sample.m, "lower-left");
    TriangularFormData form = upperBoundaryForm(blocks, sample.R2, tol.rank_rel);
    Inertia in = matrixInertia(form.gram, tol.eig_rel);
    Index gdim = graphMeetDim(blocks.A, sample.R1, tol.rank_rel);
    out.graph_dims.push_back(gdim);
    out.kernel_dims.push_back(in.zero);
    out.nu.push_back(in.zero + gdim);
    inertias.push_back(in);
  }
  const Inertia& first = inertias.front();
  const Inertia& last = inertias.back();
  out.plus = static_cast<long>(out.graph_dims.front() - out.graph_dims.back() +
                               last.negative - first.negative);
  out.minus = static_cast<long>(-out.graph_dims.front() + out.graph_dims.back() -
                                last.positive + first.positive);
  return out;
}

TriangularIndexResult triangularMaslovTypeLower(const SymplecticSpace& sp,
                                                const std::vector<TriangularSample>& path,
                                                const Subspace& X, const Subspace& Y,
                                                const Tolerances& tol) {
  if (path.empty()) throw SchemaError("triangular: empty path");
  TriangularIndexResult out;
  std::vector<Inertia> inertias;
  for (const auto& sample : path) {
    requireSymplectic(sp, sample.m, tol.symplectic_rel, "triangular");
    BlockSplit blocks = splitBlocks(sp, sample.m, X, Y);
    requireZeroBlock(blocks.B, sample.m, "upper-right");
    TriangularFormData form = lowerBoundaryForm(blocks, sample.R1, tol.rank_rel);
    Inertia in = matrixInertia(form.gram, tol.eig_rel);
    Index gdim = graphMeetDim(blocks.D, sample.R2, tol.rank_rel);
    out.graph_dims.push_back(gdim);
    out.kernel_dims.push_back(in.zero);
    out.nu.push_back(in.zero + gdim);
    inertias.push_back(in);
  }
  const Inertia& first = inertias.front();
  const Inertia& last = inertias.back();
  out.plus = static_cast<long>(out.graph_dims.front() - out.graph_dims.back() +
                               last.positive - first.positive);
  out.minus = static_cast<long>(-out.graph_dims.front() + out.graph_dims.back() -
                                last.negative + first.negative);
  return out;
}

namespace {

// Angular distance from z to the nearest other unit-circle eigenvalue of m.
double angularGap(const Mat& m, Complex z) {
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  double best = std::numbers::pi;
  double zarg = std::arg(z);
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex ev = es.eigenvalues()(i);
    if (std::abs(std::abs(ev) - 1.0) > 1e-6) continue;
    double diff = std::remainder(std::arg(ev) - zarg, 2.0 * std::numbers::pi);
    diff = std::abs(diff);
    if (diff > 1e-9 && diff < best) best = diff;
  }
  return best;
}

}  // namespace

SplittingNumbers splittingNumbers(const SymplecticSpace& sp, const Mat& m, Complex z,
                                  const Tolerances& tol) {
  if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol) {
    throw SchemaError("splitting: z must lie on the unit circle");
  }
  requireSymplectic(sp, m, tol.symplectic_rel, "splitting");
  SplittingNumbers out;
  out.nu = eigenspaceDim(m, z, tol.rank_rel);
  double arc = std::min(std::numbers::pi / 180.0, 0.5 * angularGap(m, z));
  out.arc = arc;

  MaslovOptions opt;
  opt.tol = tol;
  const int kArcSamples = 32;
  auto arcPath = [&](double sign) {
    std::vector<MatrixSample> path;
    path.reserve(kArcSamples);
    for (int j = 0; j < kArcSamples; ++j) {
      double s = arc * j / (kArcSamples - 1);
      MatrixSample ms;
      ms.s = s;
      ms.m = (std::exp(Complex(0.0, sign * s)) / z) * m;
      path.push_back(std::move(ms));
    }
    return path;
  };
  MaslovTypeResult up = maslovTypeIndexAtUnitScalar(sp, arcPath(-1.0), Complex(1.0, 0.0), opt);
  MaslovTypeResult down = maslovTypeIndexAtUnitScalar(sp, arcPath(1.0), Complex(1.0, 0.0), opt);
  out.plus = up.plus;
  out.plus_neg = -up.minus;
  out.minus = down.plus;
  out.minus_neg = -down.minus;
  return out;
}

TriangularSplittingResult splittingTriangularUpper(const SymplecticSpace& sp, const Mat& m,
                                                   Complex z, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol) {
  if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol) {
    throw SchemaError("splitting: z must lie on the unit circle");
  }
  requireSymplectic(sp, m, tol.symplectic_rel, "splitting");
  BlockSplit blocks = splitBlocks(sp, m, X, Y);
  requireZeroBlock(blocks.C, m, "lower-left");
  Index ny = blocks.D.rows();
  Mat kd = kernelBasis(blocks.D - z * Mat::Identity(ny, ny), tol.rank_rel);
  Mat g = hermitize(
      kd.adjoint() * blocks.D.adjoint() * blocks.pairing.adjoint() * blocks.B * kd,
      "splitting upper");
  TriangularSplittingResult out;
  out.form_inertia = matrixInertia(g, tol.eig_rel);
  Index nx = blocks.A.rows();
  out.eig_dim = static_cast<Index>(nx) -
                Subspace::fromColumns(blocks.A - z * Mat::Identity(nx, nx),
                                      Field::Complex, tol.rank_rel)
                    .dim();
  out.plus = out.minus = static_cast<long>(out.eig_dim - out.form_inertia.negative);
  out.plus_neg = out.minus_neg = static_cast<long>(out.eig_dim - out.form_inertia.positive);
  out.nu = out.form_inertia.zero + out.eig_dim;
  return out;
}

TriangularSplittingResult splittingTriangularLower(const SymplecticSpace& sp, const Mat& m,
                                                   Complex z, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol) {
  if (std::abs(std::abs(z) - 1.0) > kUnitCircleTol) {
    throw SchemaError("splitting: z must lie on the unit circle");
  }
  requireSymplectic(sp, m, tol.symplectic_rel, "splitting");
  BlockSplit blocks = splitBlocks(sp, m, X, Y);
  requireZeroBlock(blocks.B, m, "upper-right");
  Index nx = blocks.A.rows();
  Mat ka = kernelBasis(blocks.A - z * Mat::Identity(nx, nx), tol.rank_rel);
  Mat h = hermitize(ka.adjoint() * blocks.A.adjoint() * blocks.pairing * blocks.C * ka,
                    "splitting lower");
  TriangularSplittingResult out;
  out.form_inertia = matrixInertia(h, tol.eig_rel);
  Index ny = blocks.D.rows();
  out.eig_dim = static_cast<Index>(ny) -
                Subspace::fromColumns(blocks.D - z * Mat::Identity(ny, ny),
                                      Field::Complex, tol.rank_rel)
                    .dim();
  out.plus = out.minus = static_cast<long>(out.eig_dim - out.form_inertia.positive);
  out.plus_neg = out.minus_neg = static_cast<long>(out.eig_dim - out.form_inertia.negative);
  out.nu = out.form_inertia.zero + out.eig_dim;
  return out;
}

std::vector<MatrixSample> iteratePath(const std::vector<MatrixSample>& gamma, const Mat& p,
                                      int k) {
  if (gamma.size() < 2) throw SchemaError("iterate: path needs at least two samples");
  if (k < 1) throw SchemaError("iterate: k must be positive");
  double t0 = gamma.front().s, t1 = gamma.back().s;
  if (std::abs(t0) > 1e-12 || std::abs(t1 - 1.0) > 1e-12) {
    throw SchemaError("iterate: the base path must be parametrized over [0, 1]");
  }
  Index d = p.rows();
  if ((gamma.front().m - Mat::Identity(d, d)).norm() > 1e-8 * std::sqrt(double(d))) {
    throw SchemaError("iterate: the base path must start at the identity");
  }
  Mat q = p.partialPivLu().solve(gamma.back().m);  // P^{-1} gamma(1)
  std::vector<MatrixSample> out;
  out.reserve(gamma.size() * static_cast<size_t>(k));
  Mat pj = Mat::Identity(d, d);
  Mat qj = Mat::Identity(d, d);
  for (int j = 0; j < k; ++j) {
    for (size_t i = (j == 0 ? 0 : 1); i < gamma.size(); ++i) {
      MatrixSample ms;
      ms.s = j + gamma[i].s;
      ms.m = pj * gamma[i].m * qj;
      out.push_back(std::move(ms));
    }
    pj = pj * p;
    qj = qj * q;
  }
  return out;
}

MaslovTypeResult iterationIndex(const SymplecticSpace& sp,
                                const std::vector<MatrixSample>& gamma, const Mat& p,
                                int k, const MaslovOptions& opt) {
  std::vector<MatrixSample> extended = iteratePath(gamma, p, k);
  Mat pk_inv = matrixPower(p, k).partialPivLu().inverse();
  for (auto& sample : extended) sample.m = pk_inv * sample.m;
  return maslovTypeIndexAtUnitScalar(sp, extended, Complex(1.0, 0.0), opt);
}

namespace {

double distanceToNegativeRay(Complex ev) {
  if (ev.real() <= 0.0) return std::abs(ev.imag());
  return std::abs(ev);
}

double minRayDistance(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex ev = es.eigenvalues()(i);
    best = std::min(best, distanceToNegativeRay(ev) / (1.0 + std::abs(ev)));
  }
  return best;
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
};

}  // namespace

std::vector<MatrixSample> pathFromIdentity(const SymplecticSpace& sp, const Mat& m,
                                           int samples, unsigned long long seed) {
  requireSymplectic(sp, m, Tolerances{}.symplectic_rel, "iterate");
  if (samples < 2) throw SchemaError("iterate: need at least two samples");
  Index d = sp.dim();
  Mat shear = Mat::Zero(d, d);
  Mat shifted = m;
  // Move the spectrum away from the closed negative real axis with a seeded
  // Hamiltonian shear so the principal logarithm is well conditioned.
  Stream stream(seed ^ 0x0dedbeefull);
  Mat omega_inv = sp.form().partialPivLu().inverse();
  for (int attempt = 0; attempt < 32; ++attempt) {
    if (minRayDistance(shifted) > 1e-2) break;
    Mat h(d, d);
    for (Index i = 0; i < d; ++i) {
      h(i, i) = Complex(stream.uniform(), 0.0);
      for (Index j = i + 1; j < d; ++j) {
        Complex v(stream.uniform(),
                  sp.field() == Field::Complex ? stream.uniform() : 0.0);
        h(i, j) = v;
        h(j, i) = std::conj(v);
      }
    }
    shear = omega_inv * h * (0.4 / std::max(1.0, h.norm()));
    shifted = (-shear).exp() * m;
  }
  if (minRayDistance(shifted) <= 1e-4) {
    throw NumericalError("iterate: could not build a well-conditioned path to the matrix");
  }
  Mat logm = shifted.log();
  std::vector<MatrixSample> out;
  out.reserve(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    MatrixSample ms;
    ms.s = t;
    Mat factor = (t * logm).exp();
    ms.m = shear.norm() > 0 ? Mat((t * shear).exp() * factor) : factor;
    out.push_back(std::move(ms));
  }
  out.front().m = Mat::Identity(d, d);
  out.back().m = m;
  return out;
}

FrameCorrection iterationFrameCorrection(const SymplecticSpace& sp, const Mat& m,
                                         const Mat& p, int k, const MaslovOptions& opt) {
  std::vector<MatrixSample> gamma = pathFromIdentity(sp, m, 65, opt.tol.seed);
  MaslovTypeResult ik = iterationIndex(sp, gamma, p, k, opt);
  MaslovTypeResult i1 = iterationIndex(sp, gamma, p, 1, opt);
  FrameCorrection out;
  out.plus = ik.plus - static_cast<long>(k) * i1.plus;
  out.minus = ik.minus - static_cast<long>(k) * i1.minus;
  return out;
}

Mat accumulatedUpperBlock(const Mat& a, const Mat& b, const Mat& d, int k) {
  Mat out = Mat::Zero(b.rows(), b.cols());
  for (int j = 0; j <= k - 1; ++j) {
    out += matrixPower(a, j) * b * matrixPower(d, k - 1 - j);
  }
  return out;
}

Mat accumulatedLowerBlock(const Mat& a, const Mat& c, const Mat& d, int k) {
  Mat out = Mat::Zero(c.rows(), c.cols());
  for (int j = 0; j <= k - 1; ++j) {
    out += matrixPower(d, j) * c * matrixPower(a, k - 1 - j);
  }
  return out;
}

namespace {

Index kernelDim(const Mat& t, double rank_rel) {
  return static_cast<Index>(t.cols()) -
         Subspace::fromColumns(t, Field::Complex, rank_rel).dim();
}

}  // namespace

IterationClosedFormResult iterationClosedFormUpper(const SymplecticSpace& sp, const Mat& p,
                                                   int k, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol) {
  if (k < 1) throw SchemaError("iterate: k must be positive");
  requireSymplectic(sp, p, tol.symplectic_rel, "iterate");
  BlockSplit blocks = splitBlocks(sp, p, X, Y);
  requireZeroBlock(blocks.C, p, "lower-left");
  Index n = blocks.A.rows();
  Mat eye = Mat::Identity(n, n);

  auto boundaryInertia = [&](int kk) {
    Mat dk = matrixPower(blocks.D, kk);
    Mat bk = accumulatedUpperBlock(blocks.A, blocks.B, blocks.D, kk);
    Mat kd = kernelBasis(dk - eye, tol.rank_rel);
    Mat g = hermitize(kd.adjoint() * dk.adjoint() * blocks.pairing.adjoint() * bk * kd,
                      "iterate upper");
    return matrixInertia(g, tol.eig_rel);
  };

  IterationClosedFormResult out;
  out.ker_a = kernelDim(blocks.A - eye, tol.rank_rel);
  out.ker_ak = kernelDim(matrixPower(blocks.A, k) - eye, tol.rank_rel);
  out.ker_dk = kernelDim(matrixPower(blocks.D, k) - eye, tol.rank_rel);
  Inertia gk = boundaryInertia(k);
  Inertia g1 = boundaryInertia(1);
  out.form_inertia = gk;
  out.value = static_cast<long>((1 - k) * n) + static_cast<long>(k) * out.ker_a -
              out.ker_ak + gk.negative - static_cast<long>(k) * g1.negative;
  return out;
}

IterationClosedFormResult iterationClosedFormLower(const SymplecticSpace& sp, const Mat& p,
                                                   int k, const Subspace& X,
                                                   const Subspace& Y,
                                                   const Tolerances& tol) {
  if (k < 1) throw SchemaError("iterate: k must be positive");
  requireSymplectic(sp, p, tol.symplectic_rel, "iterate");
  BlockSplit blocks = splitBlocks(sp, p, X, Y);
  requireZeroBlock(blocks.B, p, "upper-right");
  Index n = blocks.A.rows();
  Mat eye = Mat::Identity(n, n);

  auto boundaryInertia = [&](int kk) {
    Mat ak = matrixPower(blocks.A, kk);
    Mat ck = accumulatedLowerBlock(blocks.A, blocks.C, blocks.D, kk);
    Mat ka = kernelBasis(ak - eye, tol.rank_rel);
    Mat h_raw = ka.adjoint() * ak.adjoint() * blocks.pairing * ck * ka;
    Mat h = hermitize(h_raw.conjugate(), "iterate lower");
    return matrixInertia(h, tol.eig_rel);
  };

  IterationClosedFormResult out;
  out.ker_a = kernelDim(blocks.A - eye, tol.rank_rel);
  out.ker_ak = kernelDim(matrixPower(blocks.A, k) - eye, tol.rank_rel);
  out.ker_dk = kernelDim(matrixPower(blocks.D, k) - eye, tol.rank_rel);
  Inertia hk = boundaryInertia(k);
  Inertia h1 = boundaryInertia(1);
  out.form_inertia = hk;
  out.value = static_cast<long>((1 - k) * n) + static_cast<long>(k) * out.ker_a -
              out.ker_dk + hk.positive - static_cast<long>(k) * h1.positive;
  return out;
}

Index rootSpaceDim(const Mat& m, Complex z, double rank_rel) {
  Index d = m.rows();
  Mat t = m - z * Mat::Identity(d, d);
  Mat power = Mat::Identity(d, d);
  for (Index i = 0; i < d; ++i) {
    power = power * t;
    double norm = power.norm();
    if (norm > 0) power /= norm;  // rank is scale-invariant
  }
  return d - Subspace::fromColumns(power, Field::Complex, rank_rel).dim();
}

Index negativeHyperbolicCount(const Mat& m, double rank_rel, double cluster_tol) {
  (void)rank_rel;
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  Index count = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) <= cluster_tol * (1.0 + std::abs(ev)) &&
        ev.real() < -1.0 - cluster_tol) {
      ++count;
    }
  }
  return count;
}

int alphaTildeParity(const Mat& m, double rank_rel) {
  Index root_minus_one = rootSpaceDim(m, Complex(-1.0, 0.0), rank_rel);
  if (root_minus_one % 2 != 0) {
    throw NumericalError("mod2: root space at -1 has odd dimension; "
                         "matrix is too far from symplectic");
  }
  Index alpha = negativeHyperbolicCount(m, rank_rel);
  return static_cast<int>((alpha + root_minus_one / 2) % 2);
}

double characteristicSign(const Mat& m, Complex z) {
  Index d = m.rows();
  Index n = d / 2;
  Complex det = (m - z * Mat::Identity(d, d)).determinant();
  Complex value = std::pow(-1.0, static_cast<double>(n - 1)) * std::pow(z, -double(n)) * det;
  if (std::abs(value.imag()) > 1e-6 * std::max(1.0, std::abs(value))) {
    throw NumericalError("mod2: characteristic value is not real on the unit circle");
  }
  return value.real();
}

Mod2Report mod2Index(const SymplecticSpace& sp, const std::vector<MatrixSample>& path,
                     const MaslovOptions& opt) {
  if (sp.field() != Field::Real) {
    throw SchemaError("mod2: the parity statement applies to real symplectic paths");
  }
  if (path.empty()) throw SchemaError("mod2: empty path");
  for (const auto& sample : path) {
    if (sample.m.imag().norm() > 0) {
      throw SchemaError("mod2: matrices must be real");
    }
  }
  Mod2Report out;
  out.i1 = maslovTypeIndexAtUnitScalar(sp, path, Complex(1.0, 0.0), opt).plus;
  out.alpha_start = alphaTildeParity(path.front().m, opt.tol.rank_rel);
  out.alpha_end = alphaTildeParity(path.back().m, opt.tol.rank_rel);
  out.splitting_start = splittingNumbers(sp, path.front().m, Complex(1.0, 0.0), opt.tol).plus;
  out.splitting_end = splittingNumbers(sp, path.back().m, Complex(1.0, 0.0), opt.tol).plus;
  auto parity = [](long v) { return static_cast<int>(((v % 2) + 2) % 2); };
  out.index_parity = parity(out.i1);
  out.formula_parity = parity(out.alpha_end + out.splitting_end - out.alpha_start -
                              out.splitting_start);
  return out;
}

}  // namespace sympla
