#pragma once

#include <optional>
#include <vector>

#include "sqeddy/field.hpp"
#include "sqeddy/operator.hpp"

namespace sqeddy {

/// Eigenpair lambda a = M a at parameters (nu, mu).
///
/// The vector is normalised so that a_{n0,m0} = 1 when that coefficient is
/// significant (modulus > 1e-8 after max-norm scaling); otherwise its largest
/// entry is scaled to 1. `residual` is ||M v - lambda v||_inf / ||v||_inf.
struct SpectralSolution {
  cplx lambda;
  CoefficientField vector;
  double nu = 0.0;
  double mu = 0.0;
  double residual = 0.0;
};

/// Strict ordering used for every returned spectrum: descending real part,
/// then larger |Im|, then positive imaginary part first.
bool rightmost_first(cplx a, cplx b);

/// Scales v in place as described for SpectralSolution.
void normalize_eigenvector(CoefficientField& v);

/// All eigenpairs, ordered by rightmost_first. Throws NumericalError if the
/// QR iteration does not converge or a pair cannot be refined below the
/// residual bound 1e-9 ||M||_inf.
std::vector<SpectralSolution> full_spectrum(const LinearOperator& op);
std::vector<SpectralSolution> full_spectrum(const ReducedOperator& op);

/// Eigenvalues only, ordered by rightmost_first.
std::vector<cplx> eigenvalues(const LinearOperator& op);
std::vector<cplx> eigenvalues(const Eigen::MatrixXd& m);
std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m);

/// Eigenvalues obtained block by block over coupling_components. Exact for
/// the assembled operator (a permutation similarity); much cheaper on the
/// full grid. Blocks are solved concurrently.
std::vector<cplx> eigenvalues_blocked(const LinearOperator& op);

SpectralSolution rightmost(const LinearOperator& op);
SpectralSolution rightmost(const ReducedOperator& op);
cplx rightmost_eigenvalue(const LinearOperator& op);

/// Eigenpair whose eigenvalue lies closest to `target`.
SpectralSolution nearest(const LinearOperator& op, cplx target);

struct ConvergenceRow {
  int cutoff = 0;
  std::size_t dim = 0;
  cplx lambda;
  double delta = 0.0;  // |lambda_K - lambda_{K_prev}|, 0 for the first row
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::optional<int> converged_cutoff;  // first K with delta < tolerance
};

/// Rightmost eigenvalue of the lattice operator for each cutoff (increasing).
ConvergenceStudy convergence_study(const DomainParams& params, double nu, double mu,
                                   const std::vector<int>& cutoffs, double tolerance = 1e-8);

}  // namespace sqeddy
