#include "sympla/maslov.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace sympla {

namespace {

void validatePair(const SymplecticSpace& sp, const PairSample& sample) {
  if (!sp.isLagrangian(sample.lambda) || !sp.isLagrangian(sample.mu)) {
    throw SchemaError("maslov: sample at s = " + std::to_string(sample.s) +
                      " is not a pair of Lagrangian subspaces");
  }
}

bool chartUsable(const Subspace& w, const PairSample& sample, double floor) {
  return directSumMargin(w, sample.lambda) >= floor &&
         directSumMargin(w, sample.mu) >= floor;
}

}  // namespace

HermitianForm chartForm(const SymplecticSpace& sp, const Subspace& w,
                        const Subspace& lambda, const Subspace& mu, double rank_rel) {
  Index n = sp.dim() / 2;
  if (lambda.dim() != n || mu.dim() != n || w.dim() != n) {
    throw SchemaError("chartForm: subspaces must have half the ambient dimension");
  }
  Mat frame(sp.dim(), 2 * n);
  frame << mu.basis(), w.basis();
  // lambda = {m + A m : m in mu} with A : mu -> W; the coefficients of lambda's
  // basis along mu and W give A after inverting the mu-part.
  Mat coeff = frame.colPivHouseholderQr().solve(lambda.basis());
  Mat amu = coeff.topRows(n);
  Mat bw = coeff.bottomRows(n);
  Eigen::JacobiSVD<Mat> svd(amu);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= rank_rel * std::max(1.0, sv(0))) {
    throw NumericalError("chartForm: W is not transversal to lambda");
  }
  Mat achart = amu.transpose()
                   .colPivHouseholderQr()
                   .solve(bw.transpose())
                   .transpose();  // A in mu -> W coordinates
  Mat q = mu.basis().adjoint() * sp.form() * w.basis() * achart;
  return HermitianForm(mu, q);
}

namespace {

struct Accumulator {
  long plus = 0;
  long minus = 0;
  Index runs = 0;
  Index refinements = 0;
};

void addSegment(const SymplecticSpace& sp, const PairSample& a, const PairSample& b,
                const SampleGenerator& generator, const MaslovOptions& opt, int depth,
                Accumulator& acc) {
  Subspace w;
  bool found = true;
  try {
    w = sp.commonTransversal4(a.lambda, a.mu, b.lambda, b.mu, opt.tol.seed,
                              opt.margin_floor);
  } catch (const NumericalError&) {
    found = false;
  }
  if (!found) {
    if (!generator || depth >= opt.tol.refine_depth) {
      throw NumericalError(
          "maslov: no transversal handover between s = " + std::to_string(a.s) +
          " and s = " + std::to_string(b.s) + "; provide denser samples");
    }
    PairSample mid = generator(0.5 * (a.s + b.s));
    if (opt.validate_inputs) validatePair(sp, mid);
    ++acc.refinements;
    addSegment(sp, a, mid, generator, opt, depth + 1, acc);
    addSegment(sp, mid, b, generator, opt, depth + 1, acc);
    return;
  }
  // Endpoint inertia differences are exact only when W stays transversal on
  // the whole step. A step that moves the pair by a sizable fraction of the
  // chart margin could drive an eigenvalue of Q through infinity unseen, so
  // bisect until the motion is small against the margin.
  double margin = std::min(
      std::min(directSumMargin(w, a.lambda), directSumMargin(w, a.mu)),
      std::min(directSumMargin(w, b.lambda), directSumMargin(w, b.mu)));
  double step = std::max(gapHat(a.lambda, b.lambda), gapHat(a.mu, b.mu));
  if (step > 0.4 * margin && generator && depth < opt.tol.refine_depth) {
    PairSample mid = generator(0.5 * (a.s + b.s));
    if (opt.validate_inputs) validatePair(sp, mid);
    ++acc.refinements;
    addSegment(sp, a, mid, generator, opt, depth + 1, acc);
    addSegment(sp, mid, b, generator, opt, depth + 1, acc);
    return;
  }
  HermitianForm qa = chartForm(sp, w, a.lambda, a.mu, opt.tol.rank_rel);
  HermitianForm qb = chartForm(sp, w, b.lambda, b.mu, opt.tol.rank_rel);
  Inertia ia = qa.inertia(opt.tol.eig_rel);
  Inertia ib = qb.inertia(opt.tol.eig_rel);
  acc.plus += static_cast<long>(ib.positive - ia.positive);
  acc.minus += static_cast<long>(ia.negative - ib.negative);
  ++acc.runs;
}

}  // namespace

MaslovResult maslovIndex(const SymplecticSpace& sp, std::vector<PairSample> samples,
                         const SampleGenerator& generator, const MaslovOptions& opt) {
  if (samples.empty()) {
    throw SchemaError("maslov: empty sample list");
  }
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    if (!(samples[i].s < samples[i + 1].s)) {
      throw SchemaError("maslov: sample parameters must be strictly increasing");
    }
  }
  if (opt.validate_inputs) {
    for (const auto& sample : samples) validatePair(sp, sample);
  }

  MaslovResult out;
  out.nullities.reserve(samples.size());
  for (const auto& sample : samples) {
    out.nullities.push_back(
        intersection(sample.lambda, sample.mu, opt.tol.rank_rel).dim());
  }

  Accumulator acc;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    addSegment(sp, samples[i], samples[i + 1], generator, opt, 0, acc);
  }
  out.plus = acc.plus;
  out.minus = acc.minus;
  out.runs = acc.runs;
  out.refinements = acc.refinements;

  // Chart nullities must reproduce the intersection dimensions; verify at the
  // input samples using per-sample charts.
  for (size_t i = 0; i < samples.size(); ++i) {
    Subspace w = sp.commonTransversal(samples[i].lambda, samples[i].mu, opt.tol.seed,
                                      opt.margin_floor);
    HermitianForm q = chartForm(sp, w, samples[i].lambda, samples[i].mu, opt.tol.rank_rel);
    if (q.nullity(opt.tol.eig_rel) != out.nullities[i]) {
      throw NumericalError("maslov: chart nullity disagrees with the intersection "
                           "dimension at s = " + std::to_string(samples[i].s));
    }
  }
  return out;
}

MaslovResult maslovIndexViaChart(const SymplecticSpace& sp, const Subspace& w,
                                 const std::vector<PairSample>& samples,
                                 const MaslovOptions& opt) {
  if (samples.empty()) {
    throw SchemaError("maslov: empty sample list");
  }
  MaslovResult out;
  for (const auto& sample : samples) {
    if (opt.validate_inputs) validatePair(sp, sample);
    if (!chartUsable(w, sample, opt.margin_floor * 1e-2)) {
      throw NumericalError("maslov: supplied chart fails transversality at s = " +
                           std::to_string(sample.s));
    }
    out.nullities.push_back(
        intersection(sample.lambda, sample.mu, opt.tol.rank_rel).dim());
  }
  HermitianForm qa = chartForm(sp, w, samples.front().lambda, samples.front().mu,
                               opt.tol.rank_rel);
  HermitianForm qb = chartForm(sp, w, samples.back().lambda, samples.back().mu,
                               opt.tol.rank_rel);
  Inertia ia = qa.inertia(opt.tol.eig_rel);
  Inertia ib = qb.inertia(opt.tol.eig_rel);
  out.plus = static_cast<long>(ib.positive - ia.positive);
  out.minus = static_cast<long>(ia.negative - ib.negative);
  out.runs = 1;
  return out;
}

Localization localize(const SymplecticSpace& sp, const Subspace& v,
                      const Subspace& lambda, const Subspace& mu, double rank_rel) {
  Localization loc;
  Subspace vo = sp.annihilator(v, rank_rel);
  Subspace v_plus_mu = sum(v, mu, rank_rel);
  Subspace v_plus_lambda = sum(v, lambda, rank_rel);
  loc.lambda0 = intersection(lambda, v_plus_mu, rank_rel);
  loc.lambda1 = intersection(vo, lambda, rank_rel);
  loc.mu0 = intersection(mu, v_plus_lambda, rank_rel);
  loc.mu1 = intersection(vo, mu, rank_rel);
  loc.X0 = intersection(v_plus_lambda, v_plus_mu, rank_rel);
  loc.X1 = sum(loc.lambda1, loc.mu1, rank_rel);
  return loc;
}

LocalizationCheck checkLocalization(const SymplecticSpace& sp, const Subspace& v,
                                    const Subspace& lambda, const Subspace& mu,
                                    double rank_rel, double tol) {
  Localization loc = localize(sp, v, lambda, mu, rank_rel);
  LocalizationCheck chk;
  chk.x0_is_x1_annihilator = equalSubspaces(loc.X0, sp.annihilator(loc.X1, rank_rel), tol);
  chk.x1_is_x0_annihilator = equalSubspaces(loc.X1, sp.annihilator(loc.X0, rank_rel), tol);
  chk.ambient_splits =
      intersection(loc.X0, loc.X1, rank_rel).dim() == 0 &&
      sum(loc.X0, loc.X1, rank_rel).dim() == sp.dim();
  auto splits = [&](const Subspace& whole, const Subspace& p0, const Subspace& p1) {
    return intersection(p0, p1, rank_rel).dim() == 0 &&
           equalSubspaces(sum(p0, p1, rank_rel), whole, tol);
  };
  chk.lambda_splits = splits(lambda, loc.lambda0, loc.lambda1);
  chk.mu_splits = splits(mu, loc.mu0, loc.mu1);
  chk.x0_direct_v_lambda0 = splits(loc.X0, v, loc.lambda0);
  chk.x0_direct_v_mu0 = splits(loc.X0, v, loc.mu0);
  chk.dims_match = v.dim() == loc.lambda0.dim() && v.dim() == loc.mu0.dim() &&
                   2 * v.dim() == loc.X0.dim();
  return chk;
}

MaslovResult maslovIndexLocalized(const SymplecticSpace& sp, const Subspace& v,
                                  const std::vector<PairSample>& samples,
                                  const MaslovOptions& opt) {
  if (samples.empty()) {
    throw SchemaError("maslov: empty sample list");
  }
  Localization first = localize(sp, v, samples.front().lambda, samples.front().mu,
                                opt.tol.rank_rel);
  const Subspace& x0 = first.X0;
  if (!sp.isSymplecticSubspace(x0, opt.tol.rank_rel)) {
    throw NumericalError("maslov: local ambient space is not symplectic");
  }
  const Mat& c = x0.basis();
  SymplecticSpace local =
      SymplecticSpace::fromForm(c.adjoint() * sp.form() * c, sp.field());

  std::vector<PairSample> reduced;
  reduced.reserve(samples.size());
  for (const auto& sample : samples) {
    Localization loc = localize(sp, v, sample.lambda, sample.mu, opt.tol.rank_rel);
    if (!equalSubspaces(loc.X0, x0)) {
      throw NumericalError("maslov: local ambient space moves across samples");
    }
    PairSample r;
    r.s = sample.s;
    r.lambda = Subspace(c.adjoint() * loc.lambda0.basis(), sp.field());
    r.mu = Subspace(c.adjoint() * loc.mu0.basis(), sp.field());
    reduced.push_back(std::move(r));
  }
  MaslovOptions local_opt = opt;
  local_opt.validate_inputs = true;
  return maslovIndex(local, std::move(reduced), nullptr, local_opt);
}

}  // namespace sympla
