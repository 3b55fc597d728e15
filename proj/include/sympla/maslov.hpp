#pragma once

#include <functional>
#include <vector>

#include "sympla/quadform.hpp"
#include "sympla/subspace.hpp"
#include "sympla/symplectic.hpp"
#include "sympla/types.hpp"

namespace sympla {

// One sample of a path of Lagrangian pairs.
struct PairSample {
  double s = 0.0;
  Subspace lambda;
  Subspace mu;
};

// Optional callback that produces the pair at an intermediate parameter; used
// to bisect a step when no transversal handover is found at the given samples.
using SampleGenerator = std::function<PairSample(double)>;

struct MaslovOptions {
  Tolerances tol;
  double margin_floor = 1e-6;   // minimal direct-sum margin for a usable chart
  bool validate_inputs = true;  // check each sample is a Lagrangian pair
};

struct MaslovResult {
  long plus = 0;   // positive-rule index
  long minus = 0;  // negative-rule index
  std::vector<Index> nullities;  // dim(lambda(s) cap mu(s)) at each input sample
  Index runs = 0;         // number of charts used
  Index refinements = 0;  // number of bisection samples requested
};

// Chart form of the pair (lambda, mu) with respect to a Lagrangian W that is
// transversal to both: lambda = {m + A m} with A : mu -> W, and
// Q(x, y) = omega(x, A y) on mu.
HermitianForm chartForm(const SymplecticSpace& sp, const Subspace& w,
                        const Subspace& lambda, const Subspace& mu,
                        double rank_rel = Tolerances{}.rank_rel);

// Index of a pair path computed through endpoint inertias of chart forms:
// within one chart, plus accumulates m^+(Q(end)) - m^+(Q(start)) and minus
// accumulates m^-(Q(start)) - m^-(Q(end)). Charts are switched at samples
// where the current W stops being transversal.
MaslovResult maslovIndex(const SymplecticSpace& sp, std::vector<PairSample> samples,
                         const SampleGenerator& generator = nullptr,
                         const MaslovOptions& opt = {});

// Same computation forced through one user-supplied chart; raises
// NumericalError if W fails transversality at a sample.
MaslovResult maslovIndexViaChart(const SymplecticSpace& sp, const Subspace& w,
                                 const std::vector<PairSample>& samples,
                                 const MaslovOptions& opt = {});

// Splitting of a pair with respect to a finite set V with
// ambient = V(0) + (lambda(0) + mu(0)) direct:
//   lambda0 = lambda cap (V + mu), lambda1 = V^omega cap lambda,
//   mu0 = mu cap (V + lambda),     mu1 = V^omega cap mu,
//   X0 = (V + lambda) cap (V + mu), X1 = lambda1 + mu1.
struct Localization {
  Subspace lambda0, lambda1, mu0, mu1, X0, X1;
};
Localization localize(const SymplecticSpace& sp, const Subspace& v,
                      const Subspace& lambda, const Subspace& mu,
                      double rank_rel = Tolerances{}.rank_rel);

// Structural conclusions of the splitting at one sample. All hold when the
// localization is admissible at this parameter.
struct LocalizationCheck {
  bool x0_is_x1_annihilator = false;
  bool x1_is_x0_annihilator = false;
  bool ambient_splits = false;       // ambient = X0 + X1 direct
  bool lambda_splits = false;        // lambda = lambda0 + lambda1 direct
  bool mu_splits = false;
  bool x0_direct_v_lambda0 = false;  // X0 = V + lambda0 direct
  bool x0_direct_v_mu0 = false;
  bool dims_match = false;  // dim V = dim lambda0 = dim mu0 = dim X0 / 2
  bool all() const {
    return x0_is_x1_annihilator && x1_is_x0_annihilator && ambient_splits &&
           lambda_splits && mu_splits && x0_direct_v_lambda0 &&
           x0_direct_v_mu0 && dims_match;
  }
};
LocalizationCheck checkLocalization(const SymplecticSpace& sp, const Subspace& v,
                                    const Subspace& lambda, const Subspace& mu,
                                    double rank_rel = Tolerances{}.rank_rel,
                                    double tol = 1e-8);

// Index of the localized path: each sample is split with the fixed V, the
// pieces are rebased to the (constant) local ambient X0 with its restricted
// form, and the engine runs there. X0 must not move across samples.
MaslovResult maslovIndexLocalized(const SymplecticSpace& sp, const Subspace& v,
                                  const std::vector<PairSample>& samples,
                                  const MaslovOptions& opt = {});

}  // namespace sympla
