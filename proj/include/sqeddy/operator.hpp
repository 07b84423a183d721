#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sqeddy/field.hpp"
#include "sqeddy/lattice.hpp"

namespace sqeddy {

/// One off-diagonal entry of the linearised operator: the row mode receives
/// weight * a_target. Targets are already folded back to positive indices
/// using the odd extension a_{-p,q} = a_{p,-q} = -a_{p,q}.
struct Coupling {
  ModeIndex target;
  double weight = 0.0;  // zero when the shifted index hits n = 0 or m = 0
};

/// Coupling row of Delta^{-1} L for the given mode, one entry per stencil
/// shift (order of stencil_neighbors). Independent of truncation.
std::array<Coupling, 4> coupling_row(ModeIndex row, int N);

/// Dense truncated operator M(nu, mu) = -mu + nu Delta + Delta^{-1} L acting
/// on sine coefficients, so that the spectral problem reads lambda a = M a.
struct LinearOperator {
  ModeSetPtr modes;
  Eigen::MatrixXd matrix;
  double nu = 0.0;
  double mu = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
};

LinearOperator assemble(ModeSetPtr modes, double nu, double mu);

/// Galerkin coefficients of L psi = J(psi_0, (Delta + 2) psi), evaluated
/// matrix-free from the stencil.
CoefficientField apply_L(const CoefficientField& psi);

/// Conjugate (adjoint) coupling L^* psi = -(Delta + 2) J(psi_0, psi),
/// evaluated matrix-free from the transposed stencil.
CoefficientField apply_L_adjoint(const CoefficientField& psi);

/// Operator restricted to fields with a_{n,m} = -i a_{m,n} (n even, m odd).
/// Unknowns are the representatives with n odd, m even.
struct ReducedOperator {
  ModeSetPtr modes;                       // full lattice
  std::vector<std::size_t> representatives;  // positions in `modes`, increasing
  Eigen::MatrixXcd matrix;
  double nu = 0.0;
  double mu = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
  /// Rebuilds full coordinates from representative coefficients.
  CoefficientField expand(const Eigen::VectorXcd& reduced) const;
};

/// Throws ConfigError if some retained (n odd, m even) mode lacks its
/// swapped partner.
ReducedOperator assemble_reduced(ModeSetPtr modes, double nu, double mu);

/// Connected components of the coupling graph of a mode set. The operator is
/// block diagonal with respect to this partition; each component is listed
/// in increasing position order, components ordered by their first element.
std::vector<std::vector<std::size_t>> coupling_components(const ModeSet& modes);

}  // namespace sqeddy
