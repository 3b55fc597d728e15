#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sympla {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Field { Real, Complex };

inline const char* fieldName(Field f) { return f == Field::Real ? "real" : "complex"; }

// Relative tolerances and engine knobs shared across the toolkit.
struct Tolerances {
  double rank_rel = 1e-10;       // rank cutoff relative to the largest singular value
  double eig_rel = 1e-9;         // inertia cutoff relative to max(1, spectral radius)
  double symplectic_rel = 1e-8;  // allowed relative defect in M^* Omega M = Omega
  int refine_depth = 20;         // bisection depth for transversal handover
  int mesh = 256;                // base mesh, elements per unit interval
  unsigned long long seed = 0;   // seed for deterministic perturbation sequences
};

// Raised when input data violates the documented format or preconditions.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a computation cannot be completed reliably at the given tolerances.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Inertia {
  Index positive = 0;
  Index negative = 0;
  Index zero = 0;
};

}  // namespace sympla
