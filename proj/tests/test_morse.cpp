#include "sympla/morse_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/generators.hpp"

using namespace sympla;

namespace {

// Constant-coefficient scalar problem with p = 1, q = 0 and frame a.
MorseData scalarProblem(double r_value, double a_value) {
  MorseData data;
  data.t = {0.0, 1.0};
  Mat one = Mat::Identity(1, 1);
  data.p = {one, one};
  data.q = {Mat::Zero(1, 1), Mat::Zero(1, 1)};
  data.r = {one * r_value, one * r_value};
  data.a = one * a_value;
  data.field = Field::Real;
  return data;
}

Mat matrixPower(const Mat& a, int k) {
  Mat out = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

long zhuIndex(const HamiltonianPath& hp, int k) {
  return -iterationIndex(hp.space, hp.gamma, hp.P, k).minus;
}

Index frameKernel(const Mat& a, int k) {
  Mat ak = matrixPower(a, k);
  return eigenspaceDim(Mat(ak.adjoint()), Complex(1.0));
}

// Both sides of the counting identity for one problem and one iterate.
void checkBridge(const MorseData& data, const HamiltonianPath& hp, int k,
                 int mesh) {
  GalerkinResult g = galerkinMorseIndex(data, k, mesh);
  long rhs = zhuIndex(hp, k) - frameKernel(data.a, k);
  CHECK(long(g.morse_index) == rhs);
}

}  // namespace

TEST_CASE("oscillator counts by mesh and by frequency") {
  MorseData data = scalarProblem(-12.0, 1.0);
  GalerkinResult g1 = galerkinMorseIndex(data, 1, 128);
  CHECK(g1.morse_index == 1);
  CHECK(g1.nullity == 0);
  GalerkinResult g2 = galerkinMorseIndex(data, 2, 128);
  CHECK(g2.morse_index == 3);
  CHECK(g2.nullity == 0);
  CHECK(fourierMorseIndex(data.r.front(), data.a, 1) == 1);
  CHECK(fourierMorseIndex(data.r.front(), data.a, 2) == 3);

  MorseData anti = scalarProblem(-12.0, -1.0);
  CHECK(galerkinMorseIndex(anti, 1, 128).morse_index == 2);
  CHECK(fourierMorseIndex(anti.r.front(), anti.a, 1) == 2);
  MorseData stiff = scalarProblem(5.0, -1.0);
  CHECK(galerkinMorseIndex(stiff, 1, 128).morse_index == 0);
  CHECK(fourierMorseIndex(stiff.r.front(), stiff.a, 1) == 0);
}

TEST_CASE("frequency and mesh counts agree on random constant problems") {
  gen::Rng rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    double r_value = gen::uniform(rng, -60.0, 10.0);
    double a_value = gen::coin(rng) ? 1.0 : -1.0;
    MorseData data = scalarProblem(r_value, a_value);
    for (int k = 1; k <= 2; ++k) {
      GalerkinResult g = galerkinMorseIndex(data, k, 192);
      if (g.nullity != 0) continue;  // resonant draw, the count is ambiguous
      CHECK(g.morse_index == fourierMorseIndex(data.r.front(), data.a, k));
    }
  }
}

TEST_CASE("fundamental solution of the oscillator") {
  MorseData data = scalarProblem(-12.0, 1.0);
  HamiltonianPath hp = hamiltonianPath(data);
  CHECK((hp.gamma.front().m - Mat::Identity(2, 2)).norm() < 1e-12);
  double w = std::sqrt(12.0);
  Mat expected(2, 2);  // components ordered as (momentum, position)
  expected << Complex(std::cos(w)), Complex(-w * std::sin(w)),
      Complex(std::sin(w) / w), Complex(std::cos(w));
  CHECK((hp.gamma.back().m - expected).norm() < 1e-6);
  CHECK((hp.P - Mat::Identity(2, 2)).norm() < 1e-12);
  for (const MatrixSample& smp : hp.gamma) {
    CHECK(hp.space.symplecticDefect(smp.m) < 1e-8);
  }
}

TEST_CASE("mesh count equals the path count shifted by the frame kernel") {
  MorseData data = scalarProblem(-12.0, 1.0);
  HamiltonianPath hp = hamiltonianPath(data);
  CHECK(zhuIndex(hp, 1) == 2);
  CHECK(zhuIndex(hp, 2) == 4);
  checkBridge(data, hp, 1, 128);
  checkBridge(data, hp, 2, 128);

  MorseData anti = scalarProblem(-12.0, -1.0);
  HamiltonianPath anti_hp = hamiltonianPath(anti);
  for (int k = 1; k <= 3; ++k) checkBridge(anti, anti_hp, k, 128);

  gen::Rng rng(72);
  MorseData varying = gen::randomMorseData(1, 3, rng);
  HamiltonianPath vh = hamiltonianPath(varying);
  for (int k = 1; k <= 2; ++k) checkBridge(varying, vh, k, 128);

  MorseData mixed = gen::randomMorseData(2, 2, rng);
  HamiltonianPath mh = hamiltonianPath(mixed);
  for (int k = 1; k <= 2; ++k) checkBridge(mixed, mh, k, 128);
}

TEST_CASE("iterate drift reduces to a frame correction of the monodromy") {
  MorseData data = scalarProblem(-12.0, 1.0);
  HamiltonianPath hp = hamiltonianPath(data);
  Index n = 1;
  Mat q = hp.P.inverse() * hp.gamma.back().m;
  GalerkinResult g1 = galerkinMorseIndex(data, 1, 128);
  for (int k = 2; k <= 3; ++k) {
    GalerkinResult gk = galerkinMorseIndex(data, k, 128);
    long phi = long(gk.morse_index) - k * long(g1.morse_index);
    FrameCorrection fc = iterationFrameCorrection(
        hp.space, q, Mat::Identity(2 * n, 2 * n), k);
    CHECK(phi == -fc.minus + (k - 1) * long(n));
  }

  gen::Rng rng(73);
  MorseData varying = gen::randomMorseData(1, 3, rng);
  HamiltonianPath vh = hamiltonianPath(varying);
  Mat vq = vh.P.inverse() * vh.gamma.back().m;
  GalerkinResult vg1 = galerkinMorseIndex(varying, 1, 128);
  GalerkinResult vg2 = galerkinMorseIndex(varying, 2, 128);
  FrameCorrection vfc =
      iterationFrameCorrection(vh.space, vq, Mat::Identity(2, 2), 2);
  CHECK(long(vg2.morse_index) - 2 * long(vg1.morse_index) ==
        -vfc.minus + 1);
}

TEST_CASE("parity of the count from the monodromy data") {
  auto parityIdentity = [](const MorseData& data, int mesh) {
    HamiltonianPath hp = hamiltonianPath(data);
    Mat q = hp.P.inverse() * hp.gamma.back().m;
    // The statement needs endpoint spectra clear of the unit circle except -1.
    REQUIRE(gen::gapSafeSpectrum(q, false, true));
    GalerkinResult g = galerkinMorseIndex(data, 1, mesh);
    double da = data.a.determinant().real();
    long sign_term = da > 0 ? 0 : -1;
    long rhs = alphaTildeParity(q) +
               splittingNumbers(hp.space, q, Complex(1.0)).plus + sign_term;
    return ((long(g.morse_index) - rhs) % 2 + 2) % 2 == 0;
  };

  CHECK(parityIdentity(scalarProblem(5.0, 1.0), 128));
  CHECK(parityIdentity(scalarProblem(5.0, -1.0), 128));

  gen::Rng rng(74);
  int found = 0;
  for (int attempt = 0; attempt < 60 && found < 3; ++attempt) {
    MorseData data = gen::randomMorseData(1, 3, rng);
    HamiltonianPath hp = hamiltonianPath(data);
    Mat q = hp.P.inverse() * hp.gamma.back().m;
    if (!gen::gapSafeSpectrum(q, false, true)) continue;
    ++found;
    CHECK(parityIdentity(data, 128));
  }
  CHECK(found == 3);
}

TEST_CASE("counts are stable under one mesh doubling") {
  gen::Rng rng(75);
  for (int style : {0, 1, 2, 3}) {
    MorseData data = gen::randomMorseData(style == 2 ? 2 : 1, style, rng);
    for (int k = 1; k <= 2; ++k) {
      GalerkinResult coarse = galerkinMorseIndex(data, k, 128);
      GalerkinResult fine = galerkinMorseIndex(data, k, 256);
      CHECK(coarse.morse_index == fine.morse_index);
      CHECK(coarse.nullity == fine.nullity);
    }
  }
}

TEST_CASE("counts are invariant under constant congruence") {
  gen::Rng rng(76);
  for (int trial = 0; trial < 5; ++trial) {
    MorseData data = gen::randomMorseData(2, 3, rng);
    Mat g = gen::randomInvertible(data.a.rows(), Field::Real, rng);
    MorseData moved = data;
    moved.a = g.inverse() * data.a * g;
    for (size_t i = 0; i < data.t.size(); ++i) {
      moved.p[i] = g.adjoint() * data.p[i] * g;
      moved.q[i] = g.adjoint() * data.q[i] * g;
      moved.r[i] = g.adjoint() * data.r[i] * g;
    }
    for (int mesh : {32, 64}) {
      GalerkinResult base = galerkinMorseIndex(data, 2, mesh);
      GalerkinResult morphed = galerkinMorseIndex(moved, 2, mesh);
      CHECK(base.morse_index == morphed.morse_index);
      CHECK(base.nullity == morphed.nullity);
    }
  }
}

TEST_CASE("coefficient interpolation and frame extension") {
  gen::Rng rng(77);
  MorseData data = gen::randomMorseData(2, 2, rng);
  Coefficients at_node = coefficientsAt(data, data.t[1]);
  CHECK((at_node.r - data.r[1]).norm() < 1e-12);
  Coefficients inside = coefficientsAt(data, 0.3);
  Coefficients shifted = coefficientsAt(data, 1.3);
  Mat ai = data.a.inverse();
  CHECK((shifted.r - ai.adjoint() * inside.r * ai).norm() < 1e-10);
  CHECK((shifted.p - ai.adjoint() * inside.p * ai).norm() < 1e-10);
}

TEST_CASE("morse data validation") {
  MorseData data = scalarProblem(-12.0, 1.0);
  CHECK_NOTHROW(validateMorseData(data));
  MorseData bad_grid = data;
  bad_grid.t = {0.0, 0.5, 0.25, 1.0};
  bad_grid.p = {data.p[0], data.p[0], data.p[0], data.p[0]};
  bad_grid.q = {data.q[0], data.q[0], data.q[0], data.q[0]};
  bad_grid.r = {data.r[0], data.r[0], data.r[0], data.r[0]};
  CHECK_THROWS_AS(validateMorseData(bad_grid), SchemaError);
  MorseData bad_count = data;
  bad_count.r.pop_back();
  CHECK_THROWS_AS(validateMorseData(bad_count), SchemaError);
  MorseData bad_frame = data;
  bad_frame.a = Mat::Zero(1, 1);
  CHECK_THROWS_AS(validateMorseData(bad_frame), SchemaError);
}
