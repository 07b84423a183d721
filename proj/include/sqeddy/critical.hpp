#pragma once

#include <utility>
#include <vector>

#include "sqeddy/eig.hpp"
#include "sqeddy/field.hpp"

namespace sqeddy {

/// Hopf point of the lattice operator: a conjugate pair -+ i omega_c on the
/// imaginary axis at (nu_c, mu_c).
///
/// psi_c is the eigenvector of lambda = -i omega_c with a_{n0,m0} = 1, so that
/// e^{-is} psi_c spans the kernel of the period operator. psi_c_star is the
/// conjugate eigenfunction scaled so that (psi_c, Delta psi_c_star) = 1.
struct CriticalPoint {
  DomainParams params;
  int cutoff = 0;
  double omega_c = 0.0;
  double nu_c = 0.0;
  double mu_c = 0.0;
  CoefficientField psi_c;
  CoefficientField psi_c_star;
  cplx crossing_derivative;  // d lambda / d sigma along (nu, mu) = sigma (nu_c, mu_c)

  const ModeSetPtr& modes() const { return psi_c.modes(); }
  cplx lambda() const { return {0.0, -omega_c}; }
};

struct RootOptions {
  double tolerance = 1e-10;  // on |Re lambda|
  int max_iterations = 80;
  double axis_tolerance = 1e-8;  // |Re lambda| counted as on the axis
};

/// Rightmost eigenvalue of the operator on `modes` at (nu, mu).
cplx rightmost_at(const ModeSetPtr& modes, double nu, double mu);

/// Root of Re lambda_rightmost(nu) in the bracket at fixed mu.
///
/// Throws NumericalError when the bracket has no sign change, when the
/// rightmost eigenvalue turns real inside the bracket (steady crossing), or
/// when more than one conjugate pair sits on the axis at the root.
CriticalPoint find_critical(const DomainParams& params, double mu, std::pair<double, double> nu_bracket,
                            int cutoff, const RootOptions& options = {});

/// Ray variant: (nu, mu) = sigma (nu_ref, mu_ref), root-finding in sigma.
CriticalPoint find_critical_on_ray(const DomainParams& params, double nu_ref, double mu_ref,
                                   std::pair<double, double> sigma_bracket, int cutoff,
                                   const RootOptions& options = {});

/// (-mu_c psi_c + nu_c Delta psi_c, Delta psi_c*) / (psi_c, Delta psi_c*), stored
/// into cp.crossing_derivative. Throws NumericalError when the denominator
/// vanishes (|.| < 1e-12).
cplx sigma_derivative(CriticalPoint& cp);

/// Builds a CriticalPoint from a known (nu_c, mu_c) without root finding.
CriticalPoint critical_point_at(const DomainParams& params, double nu_c, double mu_c, int cutoff,
                                const RootOptions& options = {});

struct SweepRow {
  double nu = 0.0;
  int cutoff = 0;
  cplx lambda;
};

/// Rightmost eigenvalue over a (nu, K) grid, evaluated concurrently. Rows are
/// ordered by cutoff, then nu, as given.
std::vector<SweepRow> sweep(const DomainParams& params, double mu, const std::vector<double>& nus,
                            const std::vector<int>& cutoffs);

}  // namespace sqeddy
