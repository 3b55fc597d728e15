#include "sympla/morse_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace sympla {

namespace {

void requireHermitian(const Mat& m, const char* name) {
  if ((m - m.adjoint()).norm() > 1e-8 * std::max(1.0, m.norm())) {
    throw SchemaError(std::string("morse: ") + name + " must be Hermitian");
  }
}

Mat inverseOf(const Mat& m, const char* name) {
  Eigen::PartialPivLU<Mat> lu(m);
  Mat inv = lu.inverse();
  if (!inv.allFinite() || (m * inv - Mat::Identity(m.rows(), m.cols())).norm() > 1e-6) {
    throw SchemaError(std::string("morse: ") + name + " must be invertible");
  }
  return inv;
}

}  // namespace

void validateMorseData(const MorseData& data) {
  size_t count = data.t.size();
  if (count < 2) throw SchemaError("morse: need at least two time samples");
  if (data.p.size() != count || data.q.size() != count || data.r.size() != count) {
    throw SchemaError("morse: coefficient lists must match the time grid");
  }
  if (std::abs(data.t.front()) > 1e-12 || std::abs(data.t.back() - 1.0) > 1e-12) {
    throw SchemaError("morse: the time grid must run from 0 to 1");
  }
  for (size_t i = 1; i < count; ++i) {
    if (data.t[i] <= data.t[i - 1]) {
      throw SchemaError("morse: the time grid must be strictly increasing");
    }
  }
  Index n = data.a.rows();
  if (data.a.cols() != n || n == 0) throw SchemaError("morse: bad frame matrix");
  for (size_t i = 0; i < count; ++i) {
    if (data.p[i].rows() != n || data.p[i].cols() != n || data.q[i].rows() != n ||
        data.q[i].cols() != n || data.r[i].rows() != n || data.r[i].cols() != n) {
      throw SchemaError("morse: coefficient dimensions must match the frame");
    }
    requireHermitian(data.p[i], "p");
    requireHermitian(data.r[i], "r");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (data.p[i] + data.p[i].adjoint()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw SchemaError("morse: p must be positive definite");
    }
    if (data.field == Field::Real &&
        (data.p[i].imag().norm() > 0 || data.q[i].imag().norm() > 0 ||
         data.r[i].imag().norm() > 0)) {
      throw SchemaError("morse: real data must have real coefficients");
    }
  }
  if (data.field == Field::Real && data.a.imag().norm() > 0) {
    throw SchemaError("morse: real data must have a real frame");
  }
  // Continuity of the extended coefficients at integer times requires the
  // endpoint values to be conjugate by the frame: a^* p(1) a = p(0), and the
  // same for q and r.
  Mat ai = inverseOf(data.a, "frame");
  auto compatible = [&](const Mat& end, const Mat& start) {
    return (data.a.adjoint() * end * data.a - start).norm() <=
           1e-8 * std::max(1.0, start.norm());
  };
  if (!compatible(data.p.back(), data.p.front()) ||
      !compatible(data.q.back(), data.q.front()) ||
      !compatible(data.r.back(), data.r.front())) {
    throw SchemaError("morse: endpoint coefficients are not compatible with the frame");
  }
  (void)ai;
}

Coefficients coefficientsAt(const MorseData& data, double time) {
  int shift = static_cast<int>(std::floor(time + 1e-15));
  double local = time - shift;
  if (local < 0.0) local = 0.0;
  if (local > 1.0) local = 1.0;
  auto hi = std::upper_bound(data.t.begin(), data.t.end(), local);
  size_t i1 = std::min<size_t>(data.t.size() - 1,
                               static_cast<size_t>(hi - data.t.begin()));
  if (i1 == 0) i1 = 1;
  size_t i0 = i1 - 1;
  double span = data.t[i1] - data.t[i0];
  double w = span > 0 ? (local - data.t[i0]) / span : 0.0;
  Coefficients out;
  out.p = (1.0 - w) * data.p[i0] + w * data.p[i1];
  out.q = (1.0 - w) * data.q[i0] + w * data.q[i1];
  out.r = (1.0 - w) * data.r[i0] + w * data.r[i1];
  if (shift != 0) {
    Mat al = Mat::Identity(data.a.rows(), data.a.cols());
    Mat base = shift > 0 ? inverseOf(data.a, "frame") : data.a;
    for (int i = 0; i < std::abs(shift); ++i) al = al * base;
    out.p = al.adjoint() * out.p * al;
    out.q = al.adjoint() * out.q * al;
    out.r = al.adjoint() * out.r * al;
  }
  return out;
}

namespace {

struct ElementMatrix {
  // 2 x 2 blocks of size n coupling the left and right node of one element.
  Mat e00, e01, e10, e11;
};

// Element contribution on [t0, t0 + h] with the two-point Gauss rule:
// integral of u'^* p v' + u^* q^* v' + u'^* q v + u^* r v.
ElementMatrix elementMatrix(const MorseData& data, double t0, double h) {
  Index n = data.a.rows();
  ElementMatrix e;
  e.e00 = e.e01 = e.e10 = e.e11 = Mat::Zero(n, n);
  const double offset = 0.5 / std::sqrt(3.0);
  const double points[2] = {0.5 - offset, 0.5 + offset};
  for (double s : points) {
    double weight = 0.5 * h;
    Coefficients c = coefficientsAt(data, t0 + s * h);
    double phi[2] = {1.0 - s, s};
    double dphi[2] = {-1.0 / h, 1.0 / h};
    Mat* blocks[2][2] = {{&e.e00, &e.e01}, {&e.e10, &e.e11}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        *blocks[i][j] += weight * (dphi[i] * dphi[j] * c.p +
                                   phi[i] * dphi[j] * c.q.adjoint() +
                                   dphi[i] * phi[j] * c.q + phi[i] * phi[j] * c.r);
      }
    }
  }
  return e;
}

struct FoldedSystem {
  // Block cyclic tridiagonal matrix on nodes 0 .. N-1: diagonal blocks,
  // couplings (i, i+1), and the wrap-around block (N-1, 0) created by the
  // boundary condition x(k) = a^{-k} x(0).
  std::vector<Mat> diag;
  std::vector<Mat> upper;
  Mat corner;
  Index n = 0;
  Index nodes = 0;
};

FoldedSystem assembleFolded(const MorseData& data, int k, int mesh_per_unit) {
  Index n = data.a.rows();
  Index nodes = static_cast<Index>(k) * mesh_per_unit;
  if (nodes < 3) throw SchemaError("morse: mesh too coarse");
  double h = 1.0 / mesh_per_unit;
  Mat fold = Mat::Identity(n, n);
  Mat ai = inverseOf(data.a, "frame");
  for (int i = 0; i < k; ++i) fold = fold * ai;

  FoldedSystem sys;
  sys.n = n;
  sys.nodes = nodes;
  sys.diag.assign(static_cast<size_t>(nodes), Mat::Zero(n, n));
  sys.upper.assign(static_cast<size_t>(nodes - 1), Mat::Zero(n, n));
  sys.corner = Mat::Zero(n, n);
  for (Index el = 0; el < nodes; ++el) {
    ElementMatrix e = elementMatrix(data, el * h, h);
    if (el + 1 < nodes) {
      sys.diag[el] += e.e00;
      sys.diag[el + 1] += e.e11;
      sys.upper[el] += e.e01;
    } else {
      // Last element couples node N-1 to the folded node N = fold * node 0.
      sys.diag[el] += e.e00;
      sys.diag[0] += fold.adjoint() * e.e11 * fold;
      sys.corner += e.e01 * fold;
    }
  }
  return sys;
}

Mat denseFromFolded(const FoldedSystem& sys) {
  Index total = sys.nodes * sys.n;
  Mat g = Mat::Zero(total, total);
  for (Index i = 0; i < sys.nodes; ++i) {
    g.block(i * sys.n, i * sys.n, sys.n, sys.n) = sys.diag[static_cast<size_t>(i)];
  }
  for (Index i = 0; i + 1 < sys.nodes; ++i) {
    g.block(i * sys.n, (i + 1) * sys.n, sys.n, sys.n) = sys.upper[static_cast<size_t>(i)];
    g.block((i + 1) * sys.n, i * sys.n, sys.n, sys.n) =
        sys.upper[static_cast<size_t>(i)].adjoint();
  }
  g.block((sys.nodes - 1) * sys.n, 0, sys.n, sys.n) += sys.corner;
  g.block(0, (sys.nodes - 1) * sys.n, sys.n, sys.n) += sys.corner.adjoint();
  return g;
}

GalerkinResult denseInertia(const Mat& g, double eig_rel) {
  Inertia in = matrixInertia(g, eig_rel);
  GalerkinResult out;
  out.morse_index = in.negative;
  out.nullity = in.zero;
  out.dofs = g.rows();
  return out;
}

// Inertia by a bordered block elimination: nodes 1 .. N-1 are eliminated in
// order while carrying their coupling to node 0, and the inertias of the
// pivot Schur blocks accumulate (Haynsworth). Returns false when a pivot gets
// too close to singular, in which case the caller falls back to the dense
// eigensolver.
bool sweepInertia(const FoldedSystem& sys, double eig_rel, GalerkinResult* out) {
  Index n = sys.n;
  Index nodes = sys.nodes;
  Index negative = 0;
  Mat d0 = sys.diag[0];
  Mat pivot = sys.diag[1];
  Mat border = sys.upper[0].adjoint();  // block (1, 0)
  for (Index i = 1; i < nodes; ++i) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pivot + pivot.adjoint()));
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-7 * scale) return false;
    for (Index j = 0; j < n; ++j) {
      if (es.eigenvalues()(j) < 0) ++negative;
    }
    Mat inv = es.eigenvectors() *
              es.eigenvalues().cwiseInverse().asDiagonal() *
              es.eigenvectors().adjoint();
    d0 -= border.adjoint() * inv * border;
    if (i + 1 < nodes) {
      Mat link = sys.upper[static_cast<size_t>(i)];  // block (i, i+1)
      Mat next_border = (i + 1 == nodes - 1) ? Mat(sys.corner) : Mat(Mat::Zero(n, n));
      next_border -= link.adjoint() * inv * border;
      Mat next_pivot = sys.diag[static_cast<size_t>(i + 1)] -
                       link.adjoint() * inv * link;
      pivot = std::move(next_pivot);
      border = std::move(next_border);
    }
  }
  Inertia last = matrixInertia(d0, eig_rel);
  out->morse_index = negative + last.negative;
  out->nullity = last.zero;
  out->dofs = nodes * n;
  return true;
}

}  // namespace

GalerkinResult galerkinMorseIndex(const MorseData& data, int k, int mesh_per_unit,
                                  double eig_rel) {
  validateMorseData(data);
  if (k < 1) throw SchemaError("morse: k must be positive");
  if (mesh_per_unit < 4) throw SchemaError("morse: mesh too coarse");
  FoldedSystem sys = assembleFolded(data, k, mesh_per_unit);
  if (sys.nodes * sys.n <= 600) {
    return denseInertia(denseFromFolded(sys), eig_rel);
  }
  GalerkinResult out;
  if (sweepInertia(sys, eig_rel, &out)) return out;
  return denseInertia(denseFromFolded(sys), eig_rel);
}

HamiltonianPath hamiltonianPath(const MorseData& data, int keep_samples) {
  validateMorseData(data);
  if (keep_samples < 2) throw SchemaError("morse: need at least two kept samples");
  Index n = data.a.rows();
  Index d = 2 * n;
  SymplecticSpace space = SymplecticSpace::standard(n, Field::Complex);
  const Mat& omega = space.form();

  auto bAt = [&](double t) {
    Coefficients c = coefficientsAt(data, t);
    Mat pinv = inverseOf(c.p, "p");
    Mat b(d, d);
    b.topLeftCorner(n, n) = pinv;
    b.topRightCorner(n, n) = -pinv * c.q;
    b.bottomLeftCorner(n, n) = -c.q.adjoint() * pinv;
    b.bottomRightCorner(n, n) = c.q.adjoint() * pinv * c.q - c.r;
    return Mat(0.5 * (b + b.adjoint()));
  };

  double bmax = 1.0;
  for (double t : data.t) bmax = std::max(bmax, bAt(t).cwiseAbs().maxCoeff());
  int per_segment =
      static_cast<int>(std::ceil(256.0 * std::ceil(bmax) / (keep_samples - 1)));
  int segments = keep_samples - 1;
  double h = 1.0 / (static_cast<double>(segments) * per_segment);

  HamiltonianPath out;
  out.space = space;
  out.gamma.reserve(static_cast<size_t>(keep_samples));
  Mat gamma = Mat::Identity(d, d);
  MatrixSample first;
  first.s = 0.0;
  first.m = gamma;
  out.gamma.push_back(std::move(first));
  long step_count = 0;
  for (int seg = 0; seg < segments; ++seg) {
    for (int m = 0; m < per_segment; ++m) {
      double t_mid = (seg * static_cast<double>(per_segment) + m + 0.5) * h;
      Mat jb = omega * bAt(t_mid);
      Mat lhs = Mat::Identity(d, d) - 0.5 * h * jb;
      Mat rhs = Mat::Identity(d, d) + 0.5 * h * jb;
      gamma = lhs.partialPivLu().solve(rhs * gamma);
      if (++step_count % 32 == 0) {
        Mat defect = gamma.adjoint() * omega * gamma - omega;
        Mat corr = -0.5 * omega.partialPivLu().solve(defect);
        gamma = gamma * (Mat::Identity(d, d) + corr);
      }
    }
    MatrixSample ms;
    ms.s = static_cast<double>(seg + 1) / segments;
    ms.m = gamma;
    out.gamma.push_back(std::move(ms));
  }
  Mat ainv = inverseOf(data.a, "frame");
  out.P = Mat::Zero(d, d);
  out.P.topLeftCorner(n, n) = ainv.adjoint();
  out.P.bottomRightCorner(n, n) = data.a;
  return out;
}

Index fourierMorseIndex(const Mat& r, const Mat& a, int k) {
  if (k < 1) throw SchemaError("morse: k must be positive");
  Index n = r.rows();
  if (a.rows() != n || a.cols() != n || r.cols() != n) {
    throw SchemaError("morse: dimension mismatch");
  }
  requireHermitian(r, "r");
  if ((a.adjoint() * a - Mat::Identity(n, n)).norm() > 1e-8 * n) {
    throw SchemaError("morse: the Fourier oracle needs a unitary frame");
  }
  if ((a * r - r * a).norm() > 1e-8 * std::max(1.0, r.norm())) {
    throw SchemaError("morse: the Fourier oracle needs a frame commuting with r");
  }
  Eigen::SelfAdjointEigenSolver<Mat> res(0.5 * (r + r.adjoint()));
  double scale = std::max(1.0, res.eigenvalues().cwiseAbs().maxCoeff());

  Index count = 0;
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n &&
           res.eigenvalues()(stop) - res.eigenvalues()(start) <= 1e-8 * scale) {
      ++stop;
    }
    double rho = res.eigenvalues()(start);
    Mat basis = res.eigenvectors().middleCols(start, stop - start);
    Mat restricted = basis.adjoint() * a * basis;
    if ((a * basis - basis * restricted).norm() > 1e-7) {
      throw NumericalError("morse: frame does not preserve an r-eigenspace");
    }
    Eigen::ComplexEigenSolver<Mat> aes(restricted);
    for (Index m = 0; m < aes.eigenvalues().size(); ++m) {
      if (rho >= 0.0) continue;
      double theta = std::arg(std::pow(aes.eigenvalues()(m), -k));
      double radius = k * std::sqrt(-rho);
      // count integers j with |theta + 2 pi j| < radius
      double lo = (-theta - radius) / (2.0 * std::numbers::pi);
      double hi = (-theta + radius) / (2.0 * std::numbers::pi);
      long first_j = static_cast<long>(std::ceil(lo));
      long last_j = static_cast<long>(std::floor(hi));
      if (last_j >= first_j) count += static_cast<Index>(last_j - first_j + 1);
    }
    start = stop;
  }
  return count;
}

}  // namespace sympla
