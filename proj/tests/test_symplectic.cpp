#include "sympla/symplectic.hpp"

#include <doctest.h>

#include <cmath>

#include "support/generators.hpp"

using namespace sympla;

TEST_CASE("standard space evaluates the block form") {
  SymplecticSpace sp = SymplecticSpace::standard(2, Field::Real);
  CHECK(sp.dim() == 4);
  Vec e1 = Vec::Zero(4), f1 = Vec::Zero(4);
  e1(0) = 1.0;
  f1(2) = 1.0;
  CHECK(sp.eval(e1, f1) == Complex(-1.0));
  CHECK(sp.eval(f1, e1) == Complex(1.0));
  CHECK(sp.eval(e1, e1) == Complex(0.0));
}

TEST_CASE("form is skew-Hermitian and conjugate-linear in the first slot") {
  gen::Rng rng(21);
  SymplecticSpace sp = SymplecticSpace::standard(3, Field::Complex);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x = gen::randomMatrix(6, 1, Field::Complex, rng);
    Vec y = gen::randomMatrix(6, 1, Field::Complex, rng);
    Complex c = gen::entry(rng, Field::Complex);
    CHECK(std::abs(sp.eval(x, y) + std::conj(sp.eval(y, x))) < 1e-12);
    CHECK(std::abs(sp.eval(c * x, y) - std::conj(c) * sp.eval(x, y)) < 1e-12);
    CHECK(std::abs(sp.eval(x, c * y) - c * sp.eval(x, y)) < 1e-12);
  }
}

TEST_CASE("annihilator is involutive and dimension-complementary") {
  gen::Rng rng(22);
  for (int trial = 0; trial < 25; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace v = gen::randomSubspace(2 * n, gen::pick(rng, 0, 2 * n), field, rng);
    Subspace ann = sp.annihilator(v);
    CHECK(ann.dim() == 2 * n - v.dim());
    CHECK(equalSubspaces(sp.annihilator(ann), v));
  }
}

TEST_CASE("coordinate Lagrangians and their calculus") {
  SymplecticSpace sp = SymplecticSpace::standard(3, Field::Complex);
  Subspace x = gen::xCoordinates(sp);
  Subspace y = gen::yCoordinates(sp);
  CHECK(sp.isLagrangian(x));
  CHECK(sp.isLagrangian(y));
  CHECK(sp.isIsotropic(x));
  CHECK(sp.isCoisotropic(x));
  CHECK_FALSE(sp.isSymplecticSubspace(x));
  CHECK(equalSubspaces(sp.annihilator(x), x));
}

TEST_CASE("lagrangian complement is Lagrangian and transversal") {
  gen::Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Subspace lam = gen::randomLagrangian(sp, rng);
    CHECK(sp.isLagrangian(lam));
    Subspace comp = sp.lagrangianComplement(lam);
    CHECK(sp.isLagrangian(comp));
    CHECK(intersection(lam, comp).dim() == 0);
  }
}

TEST_CASE("common transversal clears both inputs with margin") {
  gen::Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
    Subspace lam = gen::randomLagrangian(sp, rng);
    Subspace mu = gen::coin(rng) ? gen::randomLagrangian(sp, rng) : lam;
    Subspace w = sp.commonTransversal(lam, mu);
    CHECK(sp.isLagrangian(w));
    CHECK(intersection(w, lam).dim() == 0);
    CHECK(intersection(w, mu).dim() == 0);
  }
}

TEST_CASE("reduction by an isotropic subspace halves out its directions") {
  gen::Rng rng(25);
  for (int trial = 0; trial < 15; ++trial) {
    Index n = gen::pick(rng, 2, 4);
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Complex);
    // Isotropic seed: a slice of a random Lagrangian.
    Subspace lam = gen::randomLagrangian(sp, rng);
    Index r = gen::pick(rng, 1, n - 1);
    Subspace w = Subspace::fromColumns(lam.basis().leftCols(r), Field::Complex);
    REQUIRE(sp.isIsotropic(w));
    SymplecticSpace::Reduction red = sp.reduceByIsotropic(w);
    CHECK(red.reduced.dim() == 2 * (n - r));
    // Lagrangians reduce to Lagrangians.
    Subspace lred = sp.reduceSubspace(red, lam);
    CHECK(red.reduced.isLagrangian(lred));
  }
}

TEST_CASE("triple form on the standard plane triple") {
  // In the plane, gamma = span(e+f) against alpha = span(e), beta = span(f):
  // z = x + y with x = c e, y = c f, and Q(z, z) = omega(c e, c f) = -|c|^2.
  SymplecticSpace sp = SymplecticSpace::standard(1, Field::Real);
  Subspace alpha = gen::coordSpan(2, {0}, Field::Real);
  Subspace beta = gen::coordSpan(2, {1}, Field::Real);
  Mat diag(2, 1);
  diag << Complex(1), Complex(1);
  Subspace gamma = Subspace::fromColumns(diag, Field::Real);
  HermitianForm q = sp.tripleForm(alpha, beta, gamma);
  CHECK(q.carrier().dim() == 1);
  Inertia in = q.inertia();
  CHECK(in.positive == 0);
  CHECK(in.negative == 1);
  CHECK(in.zero == 0);
}

TEST_CASE("graph of a symplectic map is Lagrangian in the product") {
  gen::Rng rng(26);
  for (int trial = 0; trial < 15; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    SymplecticSpace prod = productSpace(sp, sp);
    CHECK(prod.dim() == 4 * n);
    Mat m = gen::randomSymplectic(n, field, rng);
    CHECK(sp.isSymplecticMatrix(m));
    CHECK(sp.symplecticDefect(m) < 1e-9);
    Subspace graph = graphOf(m, field);
    CHECK(prod.isLagrangian(graph));
    // Non-symplectic maps produce non-Lagrangian graphs.
    Mat bad = m;
    bad(0, 0) += 0.3;
    CHECK_FALSE(sp.isSymplecticMatrix(bad));
  }
}

TEST_CASE("generator matrices are symplectic with unit determinant blocks") {
  gen::Rng rng(27);
  for (int trial = 0; trial < 15; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    Field field = gen::coin(rng) ? Field::Real : Field::Complex;
    SymplecticSpace sp = SymplecticSpace::standard(n, field);
    Mat a = gen::randomInvertible(n, field, rng);
    Mat h = gen::randomHermitian(n, field, rng);
    CHECK(sp.symplecticDefect(gen::symplecticUpper(a, h)) < 1e-10);
    CHECK(sp.symplecticDefect(gen::symplecticLower(a, h)) < 1e-10);
    CHECK(sp.symplecticDefect(gen::randomSymplectic(n, field, rng)) < 1e-9);
    if (field == Field::Complex) {
      Mat u = gen::randomUnitary(n, field, rng);
      CHECK(sp.symplecticDefect(gen::symplecticDiagUnitary(u)) < 1e-10);
    }
  }
}

TEST_CASE("unitary embedding lands in the real symplectic orthogonal group") {
  gen::Rng rng(28);
  for (int trial = 0; trial < 10; ++trial) {
    Index n = gen::pick(rng, 1, 4);
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Real);
    Mat u = gen::randomUnitary(n, Field::Complex, rng);
    Mat q = gen::embedUnitary(u);
    CHECK(sp.symplecticDefect(q) < 1e-10);
    CHECK((q.adjoint() * q - Mat::Identity(2 * n, 2 * n)).norm() < 1e-10);
    CHECK(q.imag().norm() == 0.0);
  }
}

TEST_CASE("real polar path stays symplectic and hits its endpoints") {
  gen::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Index n = gen::pick(rng, 1, 3);
    SymplecticSpace sp = SymplecticSpace::standard(n, Field::Real);
    Mat m = gen::randomGapSafeRealSymplectic(n, rng);
    auto path = gen::realPolarPath(m, 17);
    CHECK((path.front().m - Mat::Identity(2 * n, 2 * n)).norm() < 1e-9);
    CHECK((path.back().m - m).norm() < 1e-8 * std::max(1.0, m.norm()));
    for (const auto& s : path) {
      CHECK(sp.symplecticDefect(s.m) < 1e-8);
      CHECK(s.m.imag().norm() == 0.0);
    }
  }
}
