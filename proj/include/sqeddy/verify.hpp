#pragma once

#include <string>
#include <vector>

#include "sqeddy/critical.hpp"
#include "sqeddy/eig.hpp"
#include "sqeddy/field.hpp"

namespace sqeddy {

/// A relative residual. `degenerate` flags a zero input, for which the value
/// is reported as 0.
struct Residual {
  double value = 0.0;
  bool degenerate = false;
};

/// |Re sum (lambda b + mu b + nu b^2)(b - 2)|a|^2| normalised by
/// sum (b^2 + b)|b - 2||a|^2, b = beta_{n,m}. Vanishes for exact eigenpairs.
double energy_identity_residual(cplx lambda, const CoefficientField& psi, double nu, double mu);
double energy_identity_residual(const SpectralSolution& sol);

/// a*_{n,m} = (-1)^m (2 - beta_{n,m}) conj(a_{n,m}).
CoefficientField conjugate_eigenfunction(const CoefficientField& psi);

/// Relative max-norm residual of the conjugate problem
///   0 = -conj(lambda) Delta psi* - mu Delta psi* + nu Delta^2 psi* + L^* psi*
/// with L^* the transpose of the coupling (the L2 adjoint).
Residual conjugate_residual(const CoefficientField& psi_star, cplx lambda, double nu, double mu);

/// max over (n even, m odd) of |a_{n,m} + i a_{m,n}|.
double symmetry_deviation(const CoefficientField& psi);

/// sum over (n odd, m even) of 2 beta (beta - 2) a_{n,m}^2 (analytic square).
cplx inner_product_closed_form(const CoefficientField& psi);

/// -sum over (n odd, m even) of 2 (mu beta + nu beta^2)(beta - 2) a_{n,m}^2.
cplx crossing_closed_form(const CoefficientField& psi, double nu, double mu);

/// Principal-mode split of the crossing numerator:
///   (-1)^{n0} 2 (mu b0 + nu b0^2)(b0 - 2) a_{n0,m0}^2 - sum_{n odd, m even, b > 2} ...
cplx crossing_principal_split(const CoefficientField& psi, double nu, double mu);

struct CrossingQuantities {
  cplx direct;           // (-mu psi + nu Delta psi, Delta psi*)
  cplx closed_form;      // parity-sum closed form
  cplx principal_split;  // closed form with the principal term separated
  cplx ratio;            // direct / (psi, Delta psi*)
  cplx ratio_shifted;    // -mu - nu b0 + nu ((Delta + b0) psi, Delta psi*) / (psi, Delta psi*)
};

/// Throws NumericalError when |(psi_c, Delta psi_c*)| < 1e-12.
CrossingQuantities crossing_quantities(const CriticalPoint& cp);

struct SimplicityCount {
  int plus = 0;   // eigenvalues within `window` of +i omega_c
  int minus = 0;  // eigenvalues within `window` of -i omega_c
};

/// Counts eigenvalues near +-i omega_c of the operator on the full grid
/// {1..full_cutoff}^2 (not only the lattice).
SimplicityCount simplicity_count(const DomainParams& params, double omega_c, double nu_c, double mu_c,
                                 int full_cutoff, double window = 1e-6);

struct VerificationReport {
  double energy_residual = 0.0;
  double conjugate_residual = 0.0;
  double symmetry_deviation = 0.0;
  cplx inner_product_direct;
  cplx inner_product_formula;
  cplx crossing_direct;
  cplx crossing_formula;
  cplx crossing_ratio;
  int simplicity_count_plus = 0;
  int simplicity_count_minus = 0;
  int full_cutoff = 0;
};

struct VerificationThresholds {
  double energy = 1e-8;
  double conjugate = 1e-7;
  double symmetry = 1e-8;
  double identity = 1e-9;    // relative, direct vs closed form
  double transversal = 1e-6;  // lower bound on |Re ratio|
};

VerificationReport verify_critical(const CriticalPoint& cp, int full_cutoff = 40);

/// Empty when every threshold holds; otherwise one message per breach.
std::vector<std::string> verification_failures(const VerificationReport& report,
                                               const VerificationThresholds& thresholds = {});

}  // namespace sqeddy
