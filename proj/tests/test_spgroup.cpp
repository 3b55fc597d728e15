#include "sympla/spgroup.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "support/generators.hpp"

using namespace sympla;

namespace {

Mat rotation2(double a) {
  Mat r(2, 2);
  r << Complex(std::cos(a)), Complex(-std::sin(a)), Complex(std::sin(a)),
      Complex(std::cos(a));
  return r;
}

std::vector<MatrixSample> rotationPath(double theta, int count) {
  std::vector<MatrixSample> path;
  for (int i = 0; i < count; ++i) {
    double s = double(i) / (count - 1);
    path.push_back({s, rotation2(s * theta)});
  }
  return path;
}

Mat blockDiag(const Mat& a, const Mat& d) {
  Index n = a.rows(), m = d.rows();
  Mat out = Mat::Zero(n + m, n + m);
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(m, m) = d;
  return out;
}

Mat shearUpper(double b) {
  Mat m = Mat::Identity(2, 2);
  m(0, 1) = b;
  return m;
}

Mat shearLower(double c) {
  Mat m = Mat::Identity(2, 2);
  m(1, 0) = c;
  return m;
}

Subspace graphCols(const Mat& a, Field field) {
  Mat cols(2 * a.rows(), a.cols());
  cols.topRows(a.rows()) = Mat::Identity(a.rows(), a.cols());
  cols.bottomRows(a.rows()) = a;
  return Subspace::fromColumns(cols, field);
}

}  // namespace

TEST_CASE("eigenspace and root space dimensions") {
  Mat shear = shearUpper(1.0);
  CHECK(eigenspaceDim(shear, 1.0) == 1);
  CHECK(rootSpaceDim(shear, 1.0) == 2);
  Mat hyp = blockDiag(Mat::Identity(1, 1) * 2.0, Mat::Identity(1, 1) * 0.5);
  CHECK(eigenspaceDim(hyp, 1.0) == 0);
  CHECK(rootSpaceDim(hyp, 2.0) == 1);
  CHECK(rootSpaceDim(hyp, 0.5) == 1);
}

TEST_CASE("block split against coordinate and moved splittings") {
  gen::Rng rng(61);
  Index n = 2;
  SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
  Subspace X = gen::xCoordinates(sp);
  Subspace Y = gen::yCoordinates(sp);
  Mat m = gen::randomSymplectic(n, Field::Complex, rng);
  BlockSplit bs = splitBlocks(sp, m, X, Y);
  CHECK((bs.A - m.topLeftCorner(n, n)).norm() < 1e-12);
  CHECK((bs.B - m.topRightCorner(n, n)).norm() < 1e-12);
  CHECK((bs.C - m.bottomLeftCorner(n, n)).norm() < 1e-12);
  CHECK((bs.D - m.bottomRightCorner(n, n)).norm() < 1e-12);
  CHECK((bs.pairing + Mat::Identity(n, n)).norm() < 1e-12);

  Mat upper = gen::symplecticUpper(gen::randomInvertible(n, Field::Complex, rng),
                                   gen::randomHermitian(n, Field::Complex, rng));
  CHECK(splitBlocks(sp, upper, X, Y).C.norm() < 1e-12);

  // A moved splitting reproduces the matrix after the change of coordinates.
  Mat g = gen::randomSymplectic(n, Field::Complex, rng);
  Subspace gX(g * X.basis(), Field::Complex);
  Subspace gY(g * Y.basis(), Field::Complex);
  BlockSplit moved = splitBlocks(sp, g * upper * g.inverse(), gX, gY);
  CHECK(moved.C.norm() < 1e-8);
}

TEST_CASE("accumulated off-diagonal blocks match matrix powers") {
  gen::Rng rng(62);
  for (Index n : {1, 2, 3}) {
    Mat a = gen::randomInvertible(n, Field::Complex, rng);
    Mat h = gen::randomHermitian(n, Field::Complex, rng);
    Mat up = gen::symplecticUpper(a, h);
    Mat lo = gen::symplecticLower(a, h);
    Mat A = up.topLeftCorner(n, n), B = up.topRightCorner(n, n),
        D = up.bottomRightCorner(n, n);
    Mat C = lo.bottomLeftCorner(n, n);
    Mat upk = Mat::Identity(2 * n, 2 * n), lok = upk;
    for (int k = 1; k <= 4; ++k) {
      upk = upk * up;
      lok = lok * lo;
      CHECK((upk.topRightCorner(n, n) - accumulatedUpperBlock(A, B, D, k)).norm() <
            1e-10);
      CHECK((lok.bottomLeftCorner(n, n) -
             accumulatedLowerBlock(lo.topLeftCorner(n, n), C,
                                   lo.bottomRightCorner(n, n), k))
                .norm() < 1e-10);
    }
  }
}

TEST_CASE("rotation paths against the unit scalar") {
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  for (double theta : {3.14159 / 2.0, 3.14159}) {
    std::vector<MatrixSample> path = rotationPath(theta, 17);
    MaslovTypeResult res = maslovTypeIndexAtUnitScalar(sp, path, Complex(1.0));
    // The only meeting with the diagonal is the full-rank start, counted with
    // multiplicity two by the positive rule and zero by the negative one.
    CHECK(res.plus == 2);
    CHECK(res.minus == 0);
    CHECK(res.nu.front() == 2);
    CHECK(res.nu.back() == 0);
  }
}

TEST_CASE("unit scalar agrees with the identity-graph route") {
  gen::Rng rng(63);
  SymplecticSpace sp = SymplecticSpace::standard(2, Field::Complex);
  Mat m = gen::randomSymplectic(2, Field::Complex, rng);
  std::vector<MatrixSample> path = pathFromIdentity(sp, m, 17);
  MaslovTypeResult a = maslovTypeIndexAtUnitScalar(sp, path, Complex(1.0));
  MaslovTypeResult b =
      maslovTypeIndexAgainstMatrix(sp, path, Mat::Identity(4, 4));
  CHECK(a.plus == b.plus);
  CHECK(a.minus == b.minus);
}

TEST_CASE("splitting numbers of the identity and of hyperbolic matrices") {
  for (Index n : {1, 2}) {
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
    SplittingNumbers id = splittingNumbers(sp, Mat::Identity(2 * n, 2 * n), 1.0);
    CHECK(id.plus == n);
    CHECK(id.minus == n);
    CHECK(id.nu == 2 * n);
  }
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Complex);
  Mat hyp = blockDiag(Mat::Identity(1, 1) * 2.0, Mat::Identity(1, 1) * 0.5);
  for (Complex z : {Complex(1.0), Complex(-1.0), Complex(std::polar(1.0, 0.7))}) {
    SplittingNumbers s = splittingNumbers(sp, hyp, z);
    CHECK(s.plus == 0);
    CHECK(s.minus == 0);
    CHECK(s.plus_neg == 0);
    CHECK(s.minus_neg == 0);
    CHECK(s.nu == 0);
  }
}

TEST_CASE("closed splitting forms match the arc computation") {
  gen::Rng rng(64);
  Index n = 2;
  SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
  Subspace X = gen::xCoordinates(sp);
  Subspace Y = gen::yCoordinates(sp);
  for (double theta : {0.8, 0.0}) {
    Complex z = std::polar(1.0, theta);
    Mat a = gen::matrixWithSpectrum({z, Complex(1.7)}, rng);
    Mat h = gen::randomHermitian(n, Field::Complex, rng);
    Mat up = gen::symplecticUpper(a, h);
    TriangularSplittingResult closed = splittingTriangularUpper(sp, up, z, X, Y);
    SplittingNumbers arcs = splittingNumbers(sp, up, z);
    CHECK(closed.plus == arcs.plus);
    CHECK(closed.minus == arcs.minus);
    CHECK(closed.plus_neg == arcs.plus_neg);
    CHECK(closed.minus_neg == arcs.minus_neg);
    CHECK(closed.nu == arcs.nu);
    CHECK(closed.plus == closed.minus);

    Mat lo = gen::symplecticLower(a, h);
    TriangularSplittingResult lclosed = splittingTriangularLower(sp, lo, z, X, Y);
    SplittingNumbers larcs = splittingNumbers(sp, lo, z);
    CHECK(lclosed.plus == larcs.plus);
    CHECK(lclosed.minus == larcs.minus);
    CHECK(lclosed.plus_neg == larcs.plus_neg);
    CHECK(lclosed.minus_neg == larcs.minus_neg);
    CHECK(lclosed.nu == larcs.nu);
  }

  // Same check with the splitting carried to a non-coordinate position.
  Complex z = std::polar(1.0, 0.8);
  Mat a = gen::matrixWithSpectrum({z, Complex(1.7)}, rng);
  Mat up = gen::symplecticUpper(a, gen::randomHermitian(n, Field::Complex, rng));
  Mat g = gen::randomSymplectic(n, Field::Complex, rng, 0.4);
  Subspace gX(g * X.basis(), Field::Complex);
  Subspace gY(g * Y.basis(), Field::Complex);
  TriangularSplittingResult closed =
      splittingTriangularUpper(sp, g * up * g.inverse(), z, gX, gY);
  SplittingNumbers arcs = splittingNumbers(sp, g * up * g.inverse(), z);
  CHECK(closed.plus == arcs.plus);
  CHECK(closed.minus == arcs.minus);
  CHECK(closed.nu == arcs.nu);
}

TEST_CASE("path extension through a frame") {
  gen::Rng rng(65);
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Complex);
  Mat m = gen::randomSymplectic(1, Field::Complex, rng);
  Mat p = gen::randomSymplectic(1, Field::Complex, rng);
  std::vector<MatrixSample> gamma = pathFromIdentity(sp, m, 9);
  CHECK((gamma.front().m - Mat::Identity(2, 2)).norm() < 1e-9);
  CHECK((gamma.back().m - m).norm() < 1e-9);

  int k = 3;
  std::vector<MatrixSample> ext = iteratePath(gamma, p, k);
  CHECK(ext.front().s == 0.0);
  CHECK(ext.back().s == doctest::Approx(double(k)));
  Mat q = p.inverse() * m;
  Mat expected = p * p * m * q * q;  // P^{k-1} gamma(1) (P^{-1} gamma(1))^{k-1}
  CHECK((ext.back().m - expected).norm() < 1e-8);
  for (size_t i = 1; i < ext.size(); ++i) {
    CHECK(ext[i].s > ext[i - 1].s - 1e-12);  // junction samples may coincide
  }

  std::vector<MatrixSample> plain = iteratePath(gamma, Mat::Identity(2, 2), 2);
  CHECK((plain.back().m - m * m).norm() < 1e-8);
}

TEST_CASE("paths from the identity handle negative spectra") {
  gen::Rng rng(66);
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  Mat neg = blockDiag(Mat::Identity(1, 1) * -2.0, Mat::Identity(1, 1) * -0.5);
  std::vector<MatrixSample> path = pathFromIdentity(sp, neg, 21);
  CHECK((path.front().m - Mat::Identity(2, 2)).norm() < 1e-9);
  CHECK((path.back().m - neg).norm() < 1e-8);
  for (const MatrixSample& smp : path) {
    CHECK(sp.symplecticDefect(smp.m) < 1e-7);
    CHECK(smp.m.imag().norm() < 1e-10);
  }
}

TEST_CASE("iteration index of a hyperbolic path") {
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  Mat hyp = blockDiag(Mat::Identity(1, 1) * 2.0, Mat::Identity(1, 1) * 0.5);
  std::vector<MatrixSample> gamma = pathFromIdentity(sp, hyp, 17);
  MaslovTypeResult i1 = iterationIndex(sp, gamma, Mat::Identity(2, 2), 1);
  CHECK(i1.plus == 1);
  for (int k = 2; k <= 4; ++k) {
    FrameCorrection f =
        iterationFrameCorrection(sp, hyp, Mat::Identity(2, 2), k);
    CHECK(f.plus == (1 - k));  // no unit-circle spectrum: pure dimension drift
  }
}

TEST_CASE("closed iteration forms on shears") {
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  Subspace X = gen::xCoordinates(sp);
  Subspace Y = gen::yCoordinates(sp);
  IterationClosedFormResult pos = iterationClosedFormUpper(sp, shearUpper(1.0), 2, X, Y);
  CHECK(pos.value == -1);
  CHECK(pos.ker_a == 1);
  CHECK(pos.ker_ak == 1);
  CHECK(pos.ker_dk == 1);
  IterationClosedFormResult negdir =
      iterationClosedFormUpper(sp, shearUpper(-1.0), 2, X, Y);
  CHECK(negdir.value == 0);
  FrameCorrection viaPath =
      iterationFrameCorrection(sp, shearUpper(1.0), Mat::Identity(2, 2), 2);
  CHECK(viaPath.plus == -1);
}

TEST_CASE("closed iteration forms agree with the path computation") {
  gen::Rng rng(67);
  for (int trial = 0; trial < 4; ++trial) {
    Index n = 2;
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
    Subspace X = gen::xCoordinates(sp);
    Subspace Y = gen::yCoordinates(sp);
    int k = 2 + trial % 2;
    Complex root = std::polar(1.0, 2.0 * 3.14159265358979 / k);
    Mat a = gen::matrixWithSpectrum({root, Complex(1.4)}, rng);
    Mat h = gen::randomHermitian(n, Field::Complex, rng);
    Mat id = Mat::Identity(2 * n, 2 * n);
    Mat up = gen::symplecticUpper(a, h);
    CHECK(iterationClosedFormUpper(sp, up, k, X, Y).value ==
          iterationFrameCorrection(sp, up, id, k).plus);
    Mat lo = gen::symplecticLower(a, h);
    CHECK(iterationClosedFormLower(sp, lo, k, X, Y).value ==
          iterationFrameCorrection(sp, lo, id, k).plus);
  }
}

TEST_CASE("frame change reduces to two frameless corrections") {
  gen::Rng rng(68);
  for (int trial = 0; trial < 4; ++trial) {
    Index n = 1 + trial % 2;
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
    Mat m = gen::randomSymplectic(n, Field::Complex, rng);
    Mat p = gen::randomSymplectic(n, Field::Complex, rng);
    Mat id = Mat::Identity(2 * n, 2 * n);
    int k = 2 + trial % 2;
    FrameCorrection framed = iterationFrameCorrection(sp, m, p, k);
    FrameCorrection left = iterationFrameCorrection(sp, p.inverse() * m, id, k);
    FrameCorrection right = iterationFrameCorrection(sp, p.inverse(), id, k);
    CHECK(framed.plus == left.plus - right.plus);
  }
}

TEST_CASE("triangular path closed forms on constant-trace instances") {
  Index n = 2;
  SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
  Subspace X = gen::xCoordinates(sp);
  Subspace Y = gen::yCoordinates(sp);
  Mat a0 = Mat::Identity(n, n);
  a0(1, 1) = std::polar(1.0, 0.9);
  Mat u = Mat::Identity(n, n);
  u(1, 1) = std::polar(1.0, 0.3);
  Subspace r1 = graphCols(u, Field::Complex);
  Subspace r2 = graphCols(u, Field::Complex);
  Mat p = blockDiag(u, u);  // unitary block scalar: graph splits as r1 + r2

  Subspace w = productLagrangianFromComponents(sp, X, Y, r1, r2);
  SymplecticSpace prod = productSpace(sp, sp);
  CHECK(prod.isLagrangian(w));
  CHECK(equalSubspaces(w, graphOf(p, Field::Complex)));

  auto hAt = [&](double s) {
    Mat h = Mat::Zero(n, n);
    h(0, 0) = s - 0.5;
    h(1, 1) = 0.3;
    return h;
  };
  std::vector<TriangularSample> upath, lpath;
  std::vector<MatrixSample> umat, lmat;
  for (int i = 0; i <= 8; ++i) {
    double s = i / 8.0;
    Mat up = gen::symplecticUpper(a0, hAt(s));
    Mat lo = gen::symplecticLower(a0, hAt(s));
    upath.push_back({s, up, r1, r2});
    lpath.push_back({s, lo, r1, r2});
    umat.push_back({s, up});
    lmat.push_back({s, lo});
  }

  TriangularIndexResult uclosed = triangularMaslovTypeUpper(sp, upath, X, Y);
  CHECK(uclosed.plus == 1);
  CHECK(uclosed.minus == 1);
  CHECK(uclosed.nu[4] == 2);  // the s = 0.5 sample
  CHECK(uclosed.nu[0] == 1);
  CHECK(uclosed.nu[8] == 1);
  MaslovTypeResult uengine = maslovTypeIndexAgainstMatrix(sp, umat, p);
  CHECK(uengine.plus == uclosed.plus);
  CHECK(uengine.minus == uclosed.minus);

  TriangularIndexResult lclosed = triangularMaslovTypeLower(sp, lpath, X, Y);
  CHECK(lclosed.plus == -1);
  CHECK(lclosed.minus == -1);
  MaslovTypeResult lengine = maslovTypeIndexAgainstMatrix(sp, lmat, p);
  CHECK(lengine.plus == lclosed.plus);
  CHECK(lengine.minus == lclosed.minus);
}

TEST_CASE("negative-axis counts and their parity") {
  CHECK(negativeHyperbolicCount(blockDiag(Mat::Identity(1, 1) * -2.0,
                                          Mat::Identity(1, 1) * -0.5)) == 1);
  CHECK(negativeHyperbolicCount(blockDiag(Mat::Identity(1, 1) * 2.0,
                                          Mat::Identity(1, 1) * 0.5)) == 0);
  Mat a(2, 2);
  a << Complex(-2), Complex(0), Complex(0), Complex(-3);
  Mat four = blockDiag(a, Mat(a.inverse().adjoint()));
  CHECK(negativeHyperbolicCount(four) == 2);
  CHECK(alphaTildeParity(four) == 0);
  CHECK(alphaTildeParity(-Mat::Identity(2, 2)) == 1);
  CHECK(alphaTildeParity(Mat::Identity(2, 2)) == 0);
  CHECK(alphaTildeParity(rotation2(0.9)) == 0);
  CHECK(alphaTildeParity(blockDiag(Mat::Identity(1, 1) * -2.0,
                                   Mat::Identity(1, 1) * -0.5)) == 1);
}

TEST_CASE("characteristic sign just above one detects the parity") {
  double eps = 3.14159265358979 / 180.0;
  Complex z = std::polar(1.0, eps);
  auto identityHolds = [&](const Mat& m) {
    double lhs = characteristicSign(m, z);
    int alpha = alphaTildeParity(m);
    double rhs = -(alpha % 2 == 0 ? 1.0 : -1.0);
    return lhs * rhs > 0;  // same sign
  };
  CHECK(identityHolds(Mat::Identity(2, 2)));
  CHECK(identityHolds(-Mat::Identity(2, 2)));
  CHECK(identityHolds(shearUpper(1.0)));
  CHECK(identityHolds(shearLower(1.0)));
  gen::Rng rng(69);
  for (int trial = 0; trial < 10; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Mat m = gen::randomGapSafeRealSymplectic(n, rng);
    REQUIRE(gen::gapSafeSpectrum(m));
    CHECK(identityHolds(m));
  }
}

TEST_CASE("parity identity for matrix paths") {
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  auto report = [&](const Mat& end) {
    return mod2Index(sp, pathFromIdentity(sp, end, 21));
  };

  Mod2Report hyp = report(blockDiag(Mat::Identity(1, 1) * 2.0,
                                    Mat::Identity(1, 1) * 0.5));
  CHECK(hyp.formula_parity == 1);
  CHECK(hyp.index_parity == hyp.formula_parity);
  CHECK(hyp.i1 == 1);

  Mod2Report ushear = report(shearUpper(1.0));
  CHECK(ushear.formula_parity == 1);
  CHECK(ushear.index_parity == ushear.formula_parity);

  Mod2Report lshear = report(shearLower(1.0));
  CHECK(lshear.formula_parity == 0);
  CHECK(lshear.index_parity == lshear.formula_parity);

  Mod2Report half = mod2Index(sp, rotationPath(3.14159265358979, 17));
  CHECK(half.formula_parity == 0);
  CHECK(half.index_parity == half.formula_parity);
  CHECK(half.i1 == 2);

  // Endpoints carrying unit-circle spectrum away from +-1 fall outside the
  // statement: each conjugate pair flips the right-hand side once, and adding
  // that count back reconciles the two parities.
  Mod2Report quarter = mod2Index(sp, rotationPath(3.14159265358979 / 2.0, 17));
  CHECK(quarter.index_parity == 0);
  CHECK(quarter.formula_parity == 1);
  int elliptic_pairs = 1;
  CHECK((quarter.formula_parity + elliptic_pairs) % 2 == quarter.index_parity);
}
