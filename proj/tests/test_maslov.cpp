#include "sympla/maslov.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/generators.hpp"

using namespace sympla;

namespace {

// Graph of a hermitian matrix h over the first coordinate Lagrangian.
Subspace graphOverX(const Mat& h, Field field) {
  Index n = h.rows();
  Mat cols(2 * n, n);
  cols.topRows(n) = Mat::Identity(n, n);
  cols.bottomRows(n) = h;
  return Subspace::fromColumns(cols, field);
}

// Diagonal Lagrangian built from a one-dimensional rotating x-part in C^n.
Subspace rotatingDiagonal(Index n, double angle, Index axis_a, Index axis_b) {
  Mat x_part = Mat::Zero(n, 1);
  x_part(axis_a, 0) = std::cos(angle);
  x_part(axis_b, 0) = std::sin(angle);
  return gen::diagonalLagrangian(x_part, Field::Real);
}

std::vector<PairSample> sampleGrid(const SampleGenerator& g, int count) {
  std::vector<PairSample> out;
  for (int i = 0; i < count; ++i) out.push_back(g(double(i) / (count - 1)));
  return out;
}

}  // namespace

TEST_CASE("constant pair paths have zero index and constant nullity") {
  gen::Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace lambda = gen::randomLagrangian(sp, rng);
    Subspace mu = gen::randomLagrangian(sp, rng);
    std::vector<PairSample> samples;
    for (int i = 0; i <= 4; ++i) samples.push_back({0.25 * i, lambda, mu});
    MaslovResult res = maslovIndex(sp, samples);
    CHECK(res.plus == 0);
    CHECK(res.minus == 0);
    Index overlap = intersection(lambda, mu).dim();
    for (Index nu : res.nullities) CHECK(nu == overlap);
  }
}

TEST_CASE("rotating diagonal pair that loses its overlap scores one") {
  // Both endpoints are diagonal with respect to the coordinate splitting, both
  // half-difference counts give (2 - 0) / 2 = 1 with the expected signs.
  Index n = 2;
  SymplecticSpace sp = SymplecticSpace::standard(n, Field::Real);
  Subspace mu = rotatingDiagonal(n, 0.0, 0, 1);
  SampleGenerator g = [&](double s) {
    return PairSample{s, rotatingDiagonal(n, s * 3.14159 / 4.0, 0, 1), mu};
  };
  MaslovResult res = maslovIndex(sp, sampleGrid(g, 9), g);
  CHECK(res.plus == 1);
  CHECK(res.minus == -1);
  CHECK(res.nullities.front() == 2);
  CHECK(res.nullities.back() == 0);

  // Running the same motion backwards negates both counting rules.
  SampleGenerator back = [&](double s) {
    PairSample p = g(1.0 - s);
    p.s = s;
    return p;
  };
  MaslovResult rev = maslovIndex(sp, sampleGrid(back, 9), back);
  CHECK(rev.plus == -1);
  CHECK(rev.minus == 1);
}

TEST_CASE("rotation in a plane disjoint from the partner gives zero") {
  Index n = 3;
  SymplecticSpace sp = SymplecticSpace::standard(n, Field::Real);
  Mat mu_part = Mat::Zero(n, 1);
  mu_part(2, 0) = 1.0;
  Subspace mu = gen::diagonalLagrangian(mu_part, Field::Real);
  SampleGenerator g = [&](double s) {
    return PairSample{s, rotatingDiagonal(n, 0.3 + s, 0, 1), mu};
  };
  MaslovResult res = maslovIndex(sp, sampleGrid(g, 9), g);
  CHECK(res.plus == 0);
  CHECK(res.minus == 0);
  for (Index nu : res.nullities) CHECK(nu == 1);
}

TEST_CASE("monotone graph crossings obey reversal and sign symmetry") {
  gen::Rng rng(42);
  for (int trial = 0; trial < 8; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace mu = gen::xCoordinates(sp);
    Mat sigma = gen::randomHermitian(n, field, rng);
    sigma = sigma * sigma.adjoint() + 0.2 * Mat::Identity(n, n);  // definite
    for (int flip = 0; flip < 2; ++flip) {
      Mat dir = flip ? Mat(-sigma) : sigma;
      SampleGenerator g = [&](double s) {
        return PairSample{s, graphOverX((s - 0.5) * dir, field), mu};
      };
      MaslovResult res = maslovIndex(sp, sampleGrid(g, 9), g);
      // A definite crossing is counted with full multiplicity by both rules,
      // with matching signs, and flipping the direction flips the count.
      CHECK(res.plus == res.minus);
      CHECK(std::abs(res.plus) == n);
      if (flip == 1) {
        SampleGenerator fwd = [&](double s) {
          return PairSample{s, graphOverX((s - 0.5) * sigma, field), mu};
        };
        MaslovResult pos = maslovIndex(sp, sampleGrid(fwd, 9), fwd);
        CHECK(res.plus == -pos.plus);
      }
    }
  }
}

TEST_CASE("single fixed chart agrees with the adaptive engine") {
  gen::Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace mu = graphOverX(Mat::Zero(n, n), field);
    Subspace chart = gen::yCoordinates(sp);
    Mat h0 = gen::randomHermitian(n, field, rng);
    Mat h1 = gen::randomHermitian(n, field, rng);
    SampleGenerator g = [&](double s) {
      return PairSample{s, graphOverX((1 - s) * h0 + s * h1, field), mu};
    };
    std::vector<PairSample> samples = sampleGrid(g, 17);
    MaslovResult adaptive = maslovIndex(sp, samples, g);
    MaslovResult charted = maslovIndexViaChart(sp, chart, samples);
    CHECK(adaptive.plus == charted.plus);
    CHECK(adaptive.minus == charted.minus);
  }
}

TEST_CASE("index adds along concatenated subpaths") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 12; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    gen::TriangularPairFamily fam = gen::randomTriangularPair(n, field, rng);
    SampleGenerator g = fam.generator();
    SampleGenerator left = [&](double s) { return g(0.5 * s); };
    SampleGenerator right = [&](double s) { return g(0.5 + 0.5 * s); };
    MaslovResult whole = maslovIndex(fam.sp, sampleGrid(g, 9), g);
    MaslovResult a = maslovIndex(fam.sp, sampleGrid(left, 9), left);
    MaslovResult b = maslovIndex(fam.sp, sampleGrid(right, 9), right);
    CHECK(whole.plus == a.plus + b.plus);
    CHECK(whole.minus == a.minus + b.minus);
  }
}

TEST_CASE("index is stable under fixed-endpoint homotopy") {
  gen::Rng rng(45);
  for (int trial = 0; trial < 8; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace mu = gen::randomLagrangian(sp, rng);
    Mat h0 = gen::randomHermitian(n, field, rng);
    Mat h1 = gen::randomHermitian(n, field, rng);
    Mat bump = gen::randomHermitian(n, field, rng);
    auto family = [&](double u) {
      return SampleGenerator([&sp, &mu, h0, h1, bump, u, field](double s) {
        Mat h = (1 - s) * h0 + s * h1 + u * s * (1 - s) * bump;
        return PairSample{s, graphOverX(h, field), mu};
      });
    };
    SampleGenerator base = family(0.0);
    MaslovResult ref = maslovIndex(sp, sampleGrid(base, 17), base);
    for (double u : {0.7, 1.6}) {
      SampleGenerator moved = family(u);
      MaslovResult res = maslovIndex(sp, sampleGrid(moved, 17), moved);
      CHECK(res.plus == ref.plus);
      CHECK(res.minus == ref.minus);
    }
  }
}

TEST_CASE("localization splits a crossing into a small symplectic factor") {
  SymplecticSpace sp = SymplecticSpace::standard(2, Field::Real);
  double sigma = 1.3, fixed = 0.8;
  auto hAt = [&](double s) {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = (s - 0.5) * sigma;
    h(1, 1) = fixed;
    return h;
  };
  Subspace mu = graphOverX(Mat::Zero(2, 2), Field::Real);
  Subspace v = gen::coordSpan(4, {2}, Field::Real);
  SampleGenerator g = [&](double s) {
    return PairSample{s, graphOverX(hAt(s), Field::Real), mu};
  };
  std::vector<PairSample> samples = sampleGrid(g, 9);

  for (const PairSample& smp : samples) {
    LocalizationCheck chk = checkLocalization(sp, v, smp.lambda, smp.mu);
    CHECK(chk.all());
  }
  Localization at_center = localize(sp, v, g(0.5).lambda, mu);
  CHECK(at_center.X0.dim() == 2);
  CHECK(at_center.lambda0.dim() == 1);

  MaslovResult full = maslovIndex(sp, samples, g);
  MaslovResult local = maslovIndexLocalized(sp, v, samples);
  CHECK(full.plus == local.plus);
  CHECK(full.minus == local.minus);

  // A transversality witness from the wrong symplectic factor is rejected.
  Subspace bad = gen::coordSpan(4, {3}, Field::Real);
  LocalizationCheck chk = checkLocalization(sp, bad, g(0.5).lambda, mu);
  CHECK_FALSE(chk.all());
}

TEST_CASE("input validation rejects empty and non-lagrangian data") {
  SymplecticSpace sp = SymplecticSpace::standard(2, Field::Real);
  CHECK_THROWS_AS(maslovIndex(sp, {}), SchemaError);
  Subspace not_lagrangian =
      gen::coordSpan(4, {0, 2}, Field::Real);  // symplectic plane, not isotropic
  Subspace mu = gen::coordSpan(4, {0, 1}, Field::Real);
  std::vector<PairSample> bad{{0.0, not_lagrangian, mu}, {1.0, not_lagrangian, mu}};
  CHECK_THROWS(maslovIndex(sp, bad));
}
