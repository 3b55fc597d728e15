#include "sympla/jobs.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sympla/json_io.hpp"

namespace sympla {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(where + ": missing required key \"" + key + "\"");
  }
  return j.at(key);
}

long long needInt(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError(where + ": \"" + std::string(key) + "\" must be an integer");
  }
  return v.get<long long>();
}

Json indexArray(const std::vector<Index>& v) {
  Json a = Json::array();
  for (Index x : v) a.push_back(static_cast<long long>(x));
  return a;
}

Json checkBool(const std::string& name, bool pass) {
  Json c;
  c["name"] = name;
  c["check"] = pass ? "pass" : "fail";
  return c;
}

Json checkValues(const std::string& name, long long left, long long right) {
  Json c = checkBool(name, left == right);
  c["left"] = left;
  c["right"] = right;
  return c;
}

Json checkArrays(const std::string& name, const Json& left, const Json& right) {
  Json c = checkBool(name, left == right);
  c["left"] = left;
  c["right"] = right;
  return c;
}

void requireSquare(const Mat& m, Index d, const std::string& what) {
  if (m.rows() != d || m.cols() != d) {
    throw SchemaError(what + ": expected a " + std::to_string(d) + "x" +
                      std::to_string(d) + " matrix");
  }
}

void requireSubspaceIn(const Subspace& s, Index d, Field f, const std::string& what) {
  if (s.ambientDim() != d) {
    throw SchemaError(what + ": ambient dimension must be " + std::to_string(d));
  }
  if (s.field() != f) {
    throw SchemaError(what + ": field must be " + std::string(fieldName(f)));
  }
}

Mat powInt(const Mat& m, int k) {
  Mat out = Mat::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

// ----- maslov ----------------------------------------------------------------

void runMaslov(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  SymplecticSpace sp =
      spaceFromJson(need(in, "space", "input"), "space", opt.tol.symplectic_rel);
  auto samples =
      pairSamplesFromJson(need(in, "samples", "input"), "samples", opt.tol.rank_rel);
  for (const auto& ps : samples) {
    requireSubspaceIn(ps.lambda, sp.dim(), sp.field(), "samples.lambda");
    requireSubspaceIn(ps.mu, sp.dim(), sp.field(), "samples.mu");
  }
  MaslovOptions mopt;
  mopt.tol = opt.tol;
  MaslovResult res = maslovIndex(sp, samples, nullptr, mopt);
  results["plus"] = res.plus;
  results["minus"] = res.minus;
  results["nullities"] = indexArray(res.nullities);
  results["runs"] = static_cast<long long>(res.runs);
  results["refinements"] = static_cast<long long>(res.refinements);
  if (in.contains("v")) {
    Subspace v = subspaceFromJson(in["v"], "v", opt.tol.rank_rel);
    requireSubspaceIn(v, sp.dim(), sp.field(), "v");
    MaslovResult loc = maslovIndexLocalized(sp, v, samples, mopt);
    Json l;
    l["plus"] = loc.plus;
    l["minus"] = loc.minus;
    l["nullities"] = indexArray(loc.nullities);
    results["localized"] = std::move(l);
    checks.push_back(checkBool("localization-agrees",
                               loc.plus == res.plus && loc.minus == res.minus));
  }
}

// ----- triangular ------------------------------------------------------------

void runTriangular(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  SymplecticSpace sp =
      spaceFromJson(need(in, "space", "input"), "space", opt.tol.symplectic_rel);
  auto samples =
      splitSamplesFromJson(need(in, "samples", "input"), "samples", opt.tol.rank_rel);
  for (const auto& ss : samples) {
    requireSubspaceIn(ss.X, sp.dim(), sp.field(), "samples.X");
    requireSubspaceIn(ss.Y, sp.dim(), sp.field(), "samples.Y");
    requireSubspaceIn(ss.lambda, sp.dim(), sp.field(), "samples.lambda");
    requireSubspaceIn(ss.mu, sp.dim(), sp.field(), "samples.mu");
  }
  TriangleIndexResult tri = triangleIndex(sp, samples, opt.tol.rank_rel, opt.tol.eig_rel);
  results["plus"] = tri.plus;
  results["minus"] = tri.minus;
  results["nullities"] = indexArray(tri.nullities);
  results["kernel_dims"] = indexArray(tri.kernel_dims);
  results["ab_dims"] = indexArray(tri.ab_dims);

  std::vector<PairSample> pairs;
  pairs.reserve(samples.size());
  for (const auto& ss : samples) pairs.push_back({ss.s, ss.lambda, ss.mu});
  MaslovOptions mopt;
  mopt.tol = opt.tol;
  MaslovResult eng = maslovIndex(sp, pairs, nullptr, mopt);
  Json e;
  e["plus"] = eng.plus;
  e["minus"] = eng.minus;
  e["nullities"] = indexArray(eng.nullities);
  results["engine"] = std::move(e);

  checks.push_back(checkBool("endpoint-formula-matches-engine",
                             tri.plus == eng.plus && tri.minus == eng.minus));
  bool nullity_split = true;
  for (size_t i = 0; i < tri.nullities.size(); ++i) {
    nullity_split = nullity_split &&
                    tri.nullities[i] == tri.kernel_dims[i] + tri.ab_dims[i];
  }
  checks.push_back(checkBool("nullity-decomposition", nullity_split));
  checks.push_back(checkArrays("nullities-match-engine", indexArray(tri.nullities),
                               indexArray(eng.nullities)));

  bool diagonal = true;
  for (const auto& ss : samples) {
    for (const Subspace* v : {&ss.lambda, &ss.mu}) {
      Index in_x = intersection(*v, ss.X, opt.tol.rank_rel).dim();
      Index in_y = intersection(*v, ss.Y, opt.tol.rank_rel).dim();
      diagonal = diagonal && in_x + in_y == v->dim();
    }
  }
  if (diagonal) {
    DiagonalMaslovResult diag = maslovDiagonal(sp, samples, opt.tol.rank_rel);
    Json d;
    d["plus"] = diag.plus;
    d["minus"] = diag.minus;
    d["plus_x_form"] = diag.plus_x;
    d["plus_y_form"] = diag.plus_y;
    d["cap_dims"] = indexArray(diag.cap_dims);
    d["a"] = Json(diag.a);
    d["b"] = Json(diag.b);
    results["diagonal"] = std::move(d);
    checks.push_back(checkBool("diagonal-three-forms-agree",
                               diag.plus == diag.plus_x && diag.plus == diag.plus_y));
    checks.push_back(checkBool("diagonal-matches-engine",
                               diag.plus == eng.plus && diag.minus == eng.minus));
    bool traces_ok = true;
    for (size_t i = 0; i < diag.a.size(); ++i) {
      traces_ok = traces_ok && diag.a[i] == diag.a.front() &&
                  diag.a[i] == -diag.b[i] &&
                  diag.a[i] == static_cast<long>(diag.cap_x[i] - diag.cap_y[i]);
    }
    checks.push_back(checkBool("diagonal-trace-indices", traces_ok));
  }
}

// ----- maslov-type -----------------------------------------------------------

void runMaslovType(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  SymplecticSpace sp =
      spaceFromJson(need(in, "space", "input"), "space", opt.tol.symplectic_rel);
  auto path = matrixSamplesFromJson(need(in, "path", "input"), sp.field(), "path");
  for (const auto& ms : path) requireSquare(ms.m, sp.dim(), "path.m");
  MaslovOptions mopt;
  mopt.tol = opt.tol;

  MaslovTypeResult res;
  if (in.contains("triangular")) {
    const Json& t = in["triangular"];
    Subspace X = subspaceFromJson(need(t, "X", "triangular"), "triangular.X",
                                  opt.tol.rank_rel);
    Subspace Y = subspaceFromJson(need(t, "Y", "triangular"), "triangular.Y",
                                  opt.tol.rank_rel);
    Subspace r1 = subspaceFromJson(need(t, "r1", "triangular"), "triangular.r1",
                                   opt.tol.rank_rel);
    Subspace r2 = subspaceFromJson(need(t, "r2", "triangular"), "triangular.r2",
                                   opt.tol.rank_rel);
    requireSubspaceIn(X, sp.dim(), sp.field(), "triangular.X");
    requireSubspaceIn(Y, sp.dim(), sp.field(), "triangular.Y");
    std::string shape = need(t, "shape", "triangular").get<std::string>();

    Subspace w = productLagrangianFromComponents(sp, X, Y, r1, r2, opt.tol.rank_rel);
    res = maslovTypeIndex(sp, path, {w}, mopt);

    std::vector<TriangularSample> tsamples;
    tsamples.reserve(path.size());
    for (const auto& ms : path) tsamples.push_back({ms.s, ms.m, r1, r2});
    TriangularIndexResult closed;
    if (shape == "upper") {
      closed = triangularMaslovTypeUpper(sp, tsamples, X, Y, opt.tol);
    } else if (shape == "lower") {
      closed = triangularMaslovTypeLower(sp, tsamples, X, Y, opt.tol);
    } else {
      throw SchemaError("triangular.shape must be \"upper\" or \"lower\"");
    }
    Json c;
    c["plus"] = closed.plus;
    c["minus"] = closed.minus;
    c["nu"] = indexArray(closed.nu);
    c["graph_dims"] = indexArray(closed.graph_dims);
    c["kernel_dims"] = indexArray(closed.kernel_dims);
    results["closed_form"] = std::move(c);
    checks.push_back(checkBool("closed-form-matches-engine",
                               closed.plus == res.plus && closed.minus == res.minus));
    checks.push_back(
        checkArrays("closed-form-nullities-match", indexArray(closed.nu),
                    indexArray(res.nu)));
  } else if (in.contains("w")) {
    std::vector<Subspace> ws;
    if (in["w"].is_array()) {
      for (size_t i = 0; i < in["w"].size(); ++i) {
        ws.push_back(subspaceFromJson(in["w"][i], "w[" + std::to_string(i) + "]",
                                      opt.tol.rank_rel));
      }
    } else {
      ws.push_back(subspaceFromJson(in["w"], "w", opt.tol.rank_rel));
    }
    for (const auto& w : ws) {
      requireSubspaceIn(w, 2 * sp.dim(), sp.field(), "w");
    }
    res = maslovTypeIndex(sp, path, ws, mopt);
  } else if (in.contains("p")) {
    Mat p = matrixFromJson(in["p"], sp.field(), "p");
    requireSquare(p, sp.dim(), "p");
    res = maslovTypeIndexAgainstMatrix(sp, path, p, mopt);
  } else if (in.contains("z")) {
    Complex z = scalarFromJson(in["z"], Field::Complex, "z");
    res = maslovTypeIndexAtUnitScalar(sp, path, z, mopt);
  } else {
    throw SchemaError("maslov-type: one of \"w\", \"p\", \"z\", \"triangular\" is required");
  }
  results["plus"] = res.plus;
  results["minus"] = res.minus;
  results["nu"] = indexArray(res.nu);
  results["runs"] = static_cast<long long>(res.runs);
}

// ----- splitting -------------------------------------------------------------

void runSplitting(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  const Json& mj = in.contains("M") ? in["M"] : need(in, "m", "input");
  SymplecticSpace sp;
  if (in.contains("space")) {
    sp = spaceFromJson(in["space"], "space", opt.tol.symplectic_rel);
  } else {
    Mat probe = matrixFromJson(mj, Field::Complex, "M");
    if (probe.rows() % 2 != 0) throw SchemaError("M: dimension must be even");
    sp = SymplecticSpace::standard(probe.rows() / 2, Field::Complex);
  }
  Mat m = matrixFromJson(mj, sp.field(), "M");
  requireSquare(m, sp.dim(), "M");
  Complex z = scalarFromJson(need(in, "z", "input"), Field::Complex, "z");
  if (std::abs(std::abs(z) - 1.0) > 1e-9) {
    throw SchemaError("z: splitting numbers are defined on the unit circle");
  }

  std::string method = "oracle";
  const Json* split = nullptr;
  if (in.contains("splitting")) {
    split = &in["splitting"];
    method = split->contains("method") ? (*split)["method"].get<std::string>() : "both";
  }
  if (method != "oracle" && method != "formula" && method != "both") {
    throw SchemaError("splitting.method must be \"oracle\", \"formula\" or \"both\"");
  }

  bool ran_oracle = method == "oracle" || method == "both";
  bool ran_formula = method == "formula" || method == "both";
  SplittingNumbers oracle;
  if (ran_oracle) {
    oracle = splittingNumbers(sp, m, z, opt.tol);
    Json o;
    o["plus"] = oracle.plus;
    o["minus"] = oracle.minus;
    o["plus_plus"] = oracle.plus_neg;
    o["minus_plus"] = oracle.minus_neg;
    o["nu"] = static_cast<long long>(oracle.nu);
    o["arc"] = oracle.arc;
    results["oracle"] = std::move(o);
  }
  TriangularSplittingResult formula;
  if (ran_formula) {
    if (split == nullptr) {
      throw SchemaError("splitting: the formula method needs a \"splitting\" block");
    }
    Subspace X = subspaceFromJson(need(*split, "X", "splitting"), "splitting.X",
                                  opt.tol.rank_rel);
    Subspace Y = subspaceFromJson(need(*split, "Y", "splitting"), "splitting.Y",
                                  opt.tol.rank_rel);
    requireSubspaceIn(X, sp.dim(), sp.field(), "splitting.X");
    requireSubspaceIn(Y, sp.dim(), sp.field(), "splitting.Y");
    std::string shape;
    if (split->contains("shape")) {
      shape = (*split)["shape"].get<std::string>();
    } else {
      BlockSplit blocks = splitBlocks(sp, m, X, Y);
      double scale = std::max(1.0, m.norm());
      if (blocks.C.norm() <= 1e-10 * scale) {
        shape = "upper";
      } else if (blocks.B.norm() <= 1e-10 * scale) {
        shape = "lower";
      } else {
        throw SchemaError(
            "splitting: M is not block-triangular with respect to the given X, Y");
      }
    }
    if (shape == "upper") {
      formula = splittingTriangularUpper(sp, m, z, X, Y, opt.tol);
    } else if (shape == "lower") {
      formula = splittingTriangularLower(sp, m, z, X, Y, opt.tol);
    } else {
      throw SchemaError("splitting.shape must be \"upper\" or \"lower\"");
    }
    Json f;
    f["plus"] = formula.plus;
    f["minus"] = formula.minus;
    f["plus_plus"] = formula.plus_neg;
    f["minus_plus"] = formula.minus_neg;
    f["nu"] = static_cast<long long>(formula.nu);
    f["eig_dim"] = static_cast<long long>(formula.eig_dim);
    f["shape"] = shape;
    results["formula"] = std::move(f);
  }
  if (ran_oracle && ran_formula) {
    bool same = formula.plus == oracle.plus && formula.minus == oracle.minus &&
                formula.plus_neg == oracle.plus_neg &&
                formula.minus_neg == oracle.minus_neg && formula.nu == oracle.nu;
    checks.push_back(checkBool("formula-matches-oracle", same));
  }
}

// ----- iterate ---------------------------------------------------------------

void runIterate(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  SymplecticSpace sp =
      spaceFromJson(need(in, "space", "input"), "space", opt.tol.symplectic_rel);
  Mat p = matrixFromJson(need(in, "p", "input"), sp.field(), "p");
  requireSquare(p, sp.dim(), "p");
  long long kval = needInt(in, "k", "input");
  if (kval < 1 || kval > 64) throw SchemaError("k must be in [1, 64]");
  int k = static_cast<int>(kval);

  std::vector<MatrixSample> gamma;
  if (in.contains("gamma")) {
    gamma = matrixSamplesFromJson(in["gamma"], sp.field(), "gamma");
    for (const auto& ms : gamma) requireSquare(ms.m, sp.dim(), "gamma.m");
  } else {
    Mat m = matrixFromJson(need(in, "m", "input"), sp.field(), "m");
    requireSquare(m, sp.dim(), "m");
    int samples = 65;
    if (in.contains("samples")) {
      samples = static_cast<int>(needInt(in, "samples", "input"));
      if (samples < 2 || samples > 100000) throw SchemaError("samples must be in [2, 1e5]");
    }
    gamma = pathFromIdentity(sp, m, samples, opt.tol.seed);
  }

  MaslovOptions mopt;
  mopt.tol = opt.tol;
  long ik = iterationIndex(sp, gamma, p, k, mopt).plus;
  long i1 = iterationIndex(sp, gamma, p, 1, mopt).plus;
  long f = ik - static_cast<long>(k) * i1;
  results["k"] = k;
  results["i_k"] = ik;
  results["i_1"] = i1;
  results["f"] = f;

  Mat eye = Mat::Identity(sp.dim(), sp.dim());
  Mat pinv = p.partialPivLu().solve(eye);
  Mat endpoint = gamma.back().m;
  long f_left = iterationFrameCorrection(sp, pinv * endpoint, eye, k, mopt).plus;
  long f_right = iterationFrameCorrection(sp, pinv, eye, k, mopt).plus;
  Json frame;
  frame["f_of_p_inverse_m"] = f_left;
  frame["f_of_p_inverse"] = f_right;
  results["frame"] = std::move(frame);
  checks.push_back(checkValues("frame-identity", f, f_left - f_right));

  if (in.contains("triangular")) {
    const Json& t = in["triangular"];
    Subspace X = subspaceFromJson(need(t, "X", "triangular"), "triangular.X",
                                  opt.tol.rank_rel);
    Subspace Y = subspaceFromJson(need(t, "Y", "triangular"), "triangular.Y",
                                  opt.tol.rank_rel);
    requireSubspaceIn(X, sp.dim(), sp.field(), "triangular.X");
    requireSubspaceIn(Y, sp.dim(), sp.field(), "triangular.Y");
    std::string shape = need(t, "shape", "triangular").get<std::string>();
    IterationClosedFormResult left, right;
    if (shape == "upper") {
      left = iterationClosedFormUpper(sp, pinv * endpoint, k, X, Y, opt.tol);
      right = iterationClosedFormUpper(sp, pinv, k, X, Y, opt.tol);
    } else if (shape == "lower") {
      left = iterationClosedFormLower(sp, pinv * endpoint, k, X, Y, opt.tol);
      right = iterationClosedFormLower(sp, pinv, k, X, Y, opt.tol);
    } else {
      throw SchemaError("triangular.shape must be \"upper\" or \"lower\"");
    }
    Json c;
    c["f_of_p_inverse_m"] = left.value;
    c["f_of_p_inverse"] = right.value;
    results["closed_form"] = std::move(c);
    checks.push_back(checkValues("closed-form-left", f_left, left.value));
    checks.push_back(checkValues("closed-form-right", f_right, right.value));
  }

  if (in.contains("emit_path") && in["emit_path"].is_boolean() &&
      in["emit_path"].get<bool>()) {
    Json arr = Json::array();
    for (const auto& ms : iteratePath(gamma, p, k)) {
      Json item;
      item["s"] = ms.s;
      item["m"] = matrixToJson(ms.m, sp.field());
      arr.push_back(std::move(item));
    }
    results["path"] = std::move(arr);
  }
}

// ----- mod2 ------------------------------------------------------------------

// Largest epsilon <= 1e-3 such that no unit-circle eigenvalue of m has
// argument in (0, 2 eps]; the sign identity is a statement about germs just
// above z = 1.
double safeSignEpsilon(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m);
  double eps = 1e-3;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex ev = es.eigenvalues()(i);
    if (std::abs(std::abs(ev) - 1.0) > 1e-6) continue;
    double angle = std::arg(ev);
    if (angle < 0) angle += 2.0 * std::numbers::pi;
    if (angle > 1e-9) eps = std::min(eps, angle / 2.0);
  }
  return eps;
}

void runMod2(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  SymplecticSpace sp =
      spaceFromJson(need(in, "space", "input"), "space", opt.tol.symplectic_rel);
  auto path = matrixSamplesFromJson(need(in, "path", "input"), sp.field(), "path");
  for (const auto& ms : path) requireSquare(ms.m, sp.dim(), "path.m");
  MaslovOptions mopt;
  mopt.tol = opt.tol;
  Mod2Report rep = mod2Index(sp, path, mopt);
  results["i_1"] = rep.i1;
  results["index_parity"] = rep.index_parity;
  results["formula_parity"] = rep.formula_parity;
  results["alpha_start"] = rep.alpha_start;
  results["alpha_end"] = rep.alpha_end;
  results["splitting_start"] = rep.splitting_start;
  results["splitting_end"] = rep.splitting_end;
  Json nu = Json::array();
  for (const auto& ms : path) {
    nu.push_back(static_cast<long long>(eigenspaceDim(ms.m, Complex(1.0, 0.0),
                                                      opt.tol.rank_rel)));
  }
  results["nu"] = std::move(nu);
  checks.push_back(
      checkValues("parity-identity", rep.index_parity, rep.formula_parity));

  // Sign of the characteristic function just above each endpoint eigenvalue 1:
  // sign D_{e^{i eps}}(M) = -(-1)^{alpha~(M)}.
  struct End {
    const char* name;
    const Mat* m;
    int alpha;
  };
  End ends[2] = {{"start", &path.front().m, rep.alpha_start},
                 {"end", &path.back().m, rep.alpha_end}};
  for (const End& e : ends) {
    double eps = safeSignEpsilon(*e.m);
    double value = characteristicSign(*e.m, std::polar(1.0, eps));
    int want = e.alpha % 2 == 0 ? -1 : 1;
    int got = value > 0 ? 1 : -1;
    Json c = checkValues(std::string("sign-identity-") + e.name, got, want);
    c["epsilon"] = eps;
    checks.push_back(std::move(c));
  }
}

// ----- morse -----------------------------------------------------------------

GalerkinResult stableGalerkin(const MorseData& data, int k, int mesh, double eig_rel) {
  GalerkinResult coarse = galerkinMorseIndex(data, k, mesh, eig_rel);
  GalerkinResult fine = galerkinMorseIndex(data, k, 2 * mesh, eig_rel);
  if (coarse.morse_index != fine.morse_index) {
    throw NumericalError("morse: Galerkin index did not stabilize across a mesh "
                         "doubling (" + std::to_string(coarse.morse_index) + " vs " +
                         std::to_string(fine.morse_index) + ")");
  }
  return fine;
}

void runMorse(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  MorseData data = morseDataFromJson(in, "input");
  long long nval = needInt(in, "n", "input");
  if (nval < 1) throw SchemaError("n must be positive");
  Index n = static_cast<Index>(nval);
  requireSquare(data.a, n, "a");
  for (size_t i = 0; i < data.p.size(); ++i) {
    std::string at = "samples[" + std::to_string(i) + "]";
    requireSquare(data.p[i], n, at + ".p");
    requireSquare(data.q[i], n, at + ".q");
    requireSquare(data.r[i], n, at + ".r");
  }
  validateMorseData(data);
  long long kval = needInt(in, "k", "input");
  if (kval < 1 || kval > 16) throw SchemaError("k must be in [1, 16]");
  int k = static_cast<int>(kval);
  int mesh = opt.tol.mesh;

  GalerkinResult base = stableGalerkin(data, 1, mesh, opt.tol.eig_rel);
  GalerkinResult iter = k == 1 ? base : stableGalerkin(data, k, mesh, opt.tol.eig_rel);
  Json gj;
  gj["morse_index"] = static_cast<long long>(iter.morse_index);
  gj["nullity"] = static_cast<long long>(iter.nullity);
  gj["dofs"] = static_cast<long long>(iter.dofs);
  gj["mesh"] = 2 * mesh;
  results["galerkin"] = std::move(gj);
  Json gb;
  gb["morse_index"] = static_cast<long long>(base.morse_index);
  gb["nullity"] = static_cast<long long>(base.nullity);
  gb["dofs"] = static_cast<long long>(base.dofs);
  results["galerkin_base"] = std::move(gb);

  HamiltonianPath hp = hamiltonianPath(data);
  MaslovOptions mopt;
  mopt.tol = opt.tol;
  // The discrete index identities count escaping negative directions, which is
  // the negated minus rule of the path index, not the plus rule reported by
  // the iterate command.
  long ip1 = -iterationIndex(hp.space, hp.gamma, hp.P, 1, mopt).minus;
  long ipk = k == 1 ? ip1 : -iterationIndex(hp.space, hp.gamma, hp.P, k, mopt).minus;
  Index ker_a = eigenspaceDim(data.a, Complex(1.0, 0.0), opt.tol.rank_rel);
  Index ker_ak = eigenspaceDim(powInt(data.a, k), Complex(1.0, 0.0), opt.tol.rank_rel);
  Json pj;
  pj["i_p_1"] = ip1;
  pj["i_p_k"] = ipk;
  pj["ker_a_minus_i"] = static_cast<long long>(ker_a);
  pj["ker_ak_minus_i"] = static_cast<long long>(ker_ak);
  results["path"] = std::move(pj);

  checks.push_back(checkValues("index-identity-base",
                               static_cast<long long>(base.morse_index),
                               ip1 - static_cast<long long>(ker_a)));
  checks.push_back(checkValues("index-identity-iterated",
                               static_cast<long long>(iter.morse_index),
                               ipk - static_cast<long long>(ker_ak)));

  Mat eye = Mat::Identity(hp.space.dim(), hp.space.dim());
  Mat q = hp.P.partialPivLu().solve(hp.gamma.back().m);
  if (data.field == Field::Real) q = q.real().cast<Complex>();
  long f = -iterationFrameCorrection(hp.space, q, eye, k, mopt).minus;
  long long phi = static_cast<long long>(iter.morse_index) -
                  static_cast<long long>(k) * static_cast<long long>(base.morse_index);
  results["phi"] = phi;
  results["frame_correction"] = f;
  checks.push_back(checkValues("iteration-corollary", phi,
                               f + static_cast<long long>(k - 1) * n));

  if (data.field == Field::Real) {
    int alpha = alphaTildeParity(q, opt.tol.rank_rel);
    long splus = splittingNumbers(hp.space, q, Complex(1.0, 0.0), opt.tol).plus;
    double det_a = data.a.determinant().real();
    long long offset = det_a > 0 ? 0 : -1;
    long long formula = alpha + splus + offset;
    long long lhs = ((base.morse_index % 2) + 2) % 2;
    long long rhs = ((formula % 2) + 2) % 2;
    Json parity;
    parity["alpha_tilde"] = alpha;
    parity["splitting_plus"] = splus;
    parity["det_sign_offset"] = offset;
    results["parity"] = std::move(parity);
    checks.push_back(checkValues("mod2-corollary", lhs, rhs));
  }
}

// ----- relations -------------------------------------------------------------

void runRelations(const Json& in, const JobOptions& opt, Json& results, Json& checks) {
  long long xd = needInt(in, "x_dim", "input");
  long long yd = needInt(in, "y_dim", "input");
  if (xd < 1 || yd < 1) throw SchemaError("x_dim and y_dim must be positive");
  Index d = static_cast<Index>(xd + yd);

  Subspace X, Y;
  if (in.contains("X") || in.contains("Y")) {
    X = subspaceFromJson(need(in, "X", "input"), "X", opt.tol.rank_rel);
    Y = subspaceFromJson(need(in, "Y", "input"), "Y", opt.tol.rank_rel);
    if (X.ambientDim() != d || Y.ambientDim() != d) {
      throw SchemaError("X and Y must have ambient dimension x_dim + y_dim");
    }
    if (X.dim() != xd || Y.dim() != yd) {
      throw SchemaError("X and Y must have dimensions x_dim and y_dim");
    }
  } else {
    Mat cols = Mat::Identity(d, d);
    X = Subspace::fromColumns(cols.leftCols(xd), Field::Complex, opt.tol.rank_rel);
    Y = Subspace::fromColumns(cols.rightCols(yd), Field::Complex, opt.tol.rank_rel);
  }
  Mat gram = Mat::Identity(d, d);
  if (in.contains("gram")) {
    gram = matrixFromJson(in["gram"], Field::Complex, "gram");
    requireSquare(gram, d, "gram");
  }
  RelationSpace rs(X, Y, gram, opt.tol.rank_rel);

  Subspace m = subspaceFromJson(need(in, "m", "input"), "m", opt.tol.rank_rel);
  Subspace n = subspaceFromJson(need(in, "n", "input"), "n", opt.tol.rank_rel);
  if (m.ambientDim() != d || n.ambientDim() != d) {
    throw SchemaError("m and n must have ambient dimension x_dim + y_dim");
  }

  double alpha_m = rs.alphaOf(m, opt.tol.rank_rel);
  double norm_m = rs.relationNorm(m, opt.tol.rank_rel);
  double delta_doms =
      rs.gapDelta(rs.domainOf(m, opt.tol.rank_rel), rs.domainOf(n, opt.tol.rank_rel));
  double s = in.contains("s") ? need(in, "s", "input").get<double>()
                              : delta_doms + 0.25 * (1.0 + delta_doms);
  double t = in.contains("t") ? need(in, "t", "input").get<double>()
                              : norm_m + 0.25 * (1.0 + norm_m);
  int starts = 64;
  if (in.contains("starts")) {
    starts = static_cast<int>(needInt(in, "starts", "input"));
    if (starts < 1 || starts > 100000) throw SchemaError("starts must be in [1, 1e5]");
  }

  results["s"] = s;
  results["t"] = t;
  results["alpha_m"] = alpha_m;
  results["norm_m"] = norm_m;
  results["alpha_n"] = rs.alphaOf(n, opt.tol.rank_rel);
  results["norm_n"] = rs.relationNorm(n, opt.tol.rank_rel);
  results["delta_mn"] = rs.gapDelta(m, n);
  results["delta_domains"] = delta_doms;
  results["gamma_xy"] = rs.gammaXY(opt.tol.rank_rel);
  results["norm_p"] = rs.normP();
  results["eta"] = rs.eta();

  auto found = relationInequalities(rs, m, n, s, t, starts, opt.tol.seed,
                                    opt.tol.rank_rel);
  if (in.contains("operators")) {
    const Json& ops = in["operators"];
    Mat a = matrixFromJson(need(ops, "a", "operators"), Field::Complex, "operators.a");
    Mat b = matrixFromJson(need(ops, "b", "operators"), Field::Complex, "operators.b");
    requireSquare(a, d, "operators.a");
    requireSquare(b, d, "operators.b");
    found.push_back(operatorImageGapBound(a, b, m, n, opt.tol.rank_rel));
  }
  for (const auto& q : found) {
    Json c = checkBool(q.name, q.holds(1e-9));
    c["lhs"] = q.lhs;
    c["rhs"] = q.rhs;
    checks.push_back(std::move(c));
  }
}

}  // namespace

JobOutcome runJob(const std::string& command, const std::string& input_text,
                  const JobOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  Json report;
  report["command"] = command;
  report["input_digest"] = digestString(input_text);
  Json tolj;
  tolj["rank_rel"] = opt.tol.rank_rel;
  tolj["eig_rel"] = opt.tol.eig_rel;
  tolj["symplectic_rel"] = opt.tol.symplectic_rel;
  tolj["refine_depth"] = opt.tol.refine_depth;
  tolj["mesh"] = opt.tol.mesh;
  tolj["seed"] = opt.tol.seed;
  report["tolerances"] = std::move(tolj);

  JobOutcome out;
  try {
    Json input = Json::parse(input_text);
    Json results = Json::object();
    Json checks = Json::array();
    if (command == "maslov") {
      runMaslov(input, opt, results, checks);
    } else if (command == "triangular") {
      runTriangular(input, opt, results, checks);
    } else if (command == "maslov-type") {
      runMaslovType(input, opt, results, checks);
    } else if (command == "splitting") {
      runSplitting(input, opt, results, checks);
    } else if (command == "iterate") {
      runIterate(input, opt, results, checks);
    } else if (command == "mod2") {
      runMod2(input, opt, results, checks);
    } else if (command == "morse") {
      runMorse(input, opt, results, checks);
    } else if (command == "relations") {
      runRelations(input, opt, results, checks);
    } else {
      throw SchemaError("unknown command \"" + command +
                        "\"; expected one of maslov, triangular, maslov-type, "
                        "splitting, iterate, mod2, morse, relations");
    }
    report["results"] = std::move(results);
    report["checks"] = std::move(checks);
    out.exit_code = kExitOk;
  } catch (const Json::parse_error& e) {
    report["error"] = Json{{"type", "schema"}, {"message", e.what()}};
    out.exit_code = kExitSchemaError;
  } catch (const Json::exception& e) {
    report["error"] = Json{{"type", "schema"}, {"message", e.what()}};
    out.exit_code = kExitSchemaError;
  } catch (const SchemaError& e) {
    report["error"] = Json{{"type", "schema"}, {"message", e.what()}};
    out.exit_code = kExitSchemaError;
  } catch (const NumericalError& e) {
    report["error"] = Json{{"type", "numerical"}, {"message", e.what()}};
    out.exit_code = kExitNumericalError;
  }
  if (!opt.no_meta) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    report["meta"] = Json{{"wall_time_ms", static_cast<long long>(elapsed.count())}};
  }
  out.report = report.dump(2) + "\n";
  return out;
}

}  // namespace sympla
