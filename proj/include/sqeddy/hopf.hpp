#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "sqeddy/critical.hpp"
#include "sqeddy/error.hpp"
#include "sqeddy/operator.hpp"
#include "sqeddy/spacetime.hpp"

namespace sqeddy {

/// Iterate of the fixed-point map: (sigma - 1, omega - omega_c, phi).
struct BranchState {
  double sigma_shift = 0.0;
  double omega_shift = 0.0;
  SpaceTimeField phi;
};

/// Converged branch point psi = eps (phi_c + phi) at (sigma nu_c, sigma mu_c)
/// with frequency omega.
struct BranchPoint {
  double epsilon = 0.0;
  double omega = 0.0;
  double sigma = 1.0;
  SpaceTimeField phi;
  int iterations = 0;
  double residual_aabb = 0.0;
  double max_orthogonality = 0.0;   // worst |<Phi, Delta phi_c*>| over the run
  double contraction_factor = 0.0;  // worst consecutive change ratio after step 3
  std::vector<double> changes;
};

/// Raised when the iteration diverges or hits the cap; carries the last iterate.
class BranchFailure : public NumericalError {
 public:
  BranchFailure(const std::string& what, BranchPoint last) : NumericalError(what), last_(std::move(last)) {}
  const BranchPoint& last() const { return last_; }

 private:
  BranchPoint last_;
};

struct BranchOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  int divergence_window = 5;
  double orthogonality_tolerance = 1e-9;
};

/// Space-time truncation of the rescaled periodic problem around a critical
/// point. Space is the full grid {1..K}^2 with K = cp.cutoff (the lattice of
/// cp is an invariant sub-block), time is |k| <= F.
class HopfProblem {
 public:
  HopfProblem(const CriticalPoint& cp, int time_modes);

  const CriticalPoint& critical() const { return cp_; }
  const ModeSetPtr& modes() const { return modes_; }
  int F() const { return F_; }

  /// phi_c = e^{-is} psi_c + e^{is} conj(psi_c).
  const SpaceTimeField& phi_c() const { return phi_c_; }
  /// Delta psi_c* on the full grid.
  const CoefficientField& dstar() const { return dstar_; }

  /// <X, e^{-is} Delta psi_c*> and <X, e^{is} Delta conj(psi_c*)>.
  cplx pairing_minus(const SpaceTimeField& X) const;
  cplx pairing_plus(const SpaceTimeField& X) const;

  SpaceTimeField project_P(const SpaceTimeField& X) const;

  /// (-mu_c + nu_c Delta) X.
  SpaceTimeField dissipation(const SpaceTimeField& X) const;

  /// New sigma - 1 from the current state. `advected` is
  /// Delta^{-1} J(phi_c + phi, Delta(phi_c + phi)).
  double f_epsilon(const BranchState& state, double eps, const SpaceTimeField& advected) const;
  double f_epsilon(const BranchState& state, double eps) const;

  /// New omega - omega_c from the current state and f = f_epsilon.
  double g_epsilon(const BranchState& state, double eps, double f, const SpaceTimeField& advected) const;
  double g_epsilon(const BranchState& state, double eps, double f) const;

  /// -(omega - omega_c) d_s phi + (sigma - 1)(-mu_c + nu_c Delta) phi
  ///   - g d_s phi_c + f (-mu_c + nu_c Delta) phi_c + eps advected.
  SpaceTimeField forcing(const BranchState& state, double eps, double f, double g,
                         const SpaceTimeField& advected) const;

  /// Solves (-omega_c d_s - mu_c + nu_c Delta + Delta^{-1} L) phi = rhs per time
  /// frequency. At k = +-1 a bordered system enforces phi in the range of P.
  /// Throws NumericalError when rhs has a critical pairing above 1e-8.
  SpaceTimeField resolvent_apply(const SpaceTimeField& rhs) const;

  /// Fixed point of F_eps. eps = 0 returns the origin without iterating.
  BranchPoint solve_branch(double eps, const BranchOptions& options = {}) const;

  /// Deviations of the time-average identities for a P-range phi:
  ///   <d_s phi, Delta phi_c*> = 0,
  ///   <d_s phi_c, Delta phi_c*> = -i (psi_c, Delta psi_c*),
  ///   <(-mu_c + nu_c Delta) phi_c, Delta phi_c*> = (-mu_c psi_c + nu_c Delta psi_c, Delta psi_c*).
  std::array<double, 3> pairing_identity_defects(const SpaceTimeField& phi) const;

  /// Reconstructed psi = eps (phi_c + phi).
  SpaceTimeField reconstruct(const BranchPoint& point) const;

 private:
  struct Block {
    std::vector<Eigen::Index> rows;
    bool critical = false;
  };
  void solve_frequency(int k, const Eigen::VectorXcd& rhs, Eigen::Ref<Eigen::VectorXcd> out) const;

  CriticalPoint cp_;
  ModeSetPtr modes_;
  int F_;
  LinearOperator op_;
  CoefficientField psi_c_;
  CoefficientField dstar_;
  cplx denominator_;
  SpaceTimeField phi_c_;
  std::vector<Block> blocks_;
  // lu_[k][b] factors block b of (M - i omega_c k), k = 0..F; the critical
  // block at k = 1 is bordered.
  std::vector<std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>>> lu_;
};

/// Relative max-norm residual of
///   -omega d_s psi + nu Delta psi - mu psi + Delta^{-1} L psi + Delta^{-1} J(psi, Delta psi)
/// on the truncation of psi: max |sum| / max over the five terms of ||term||_inf.
/// The Jacobian is evaluated exactly on the retained modes (what an enlarged
/// evaluation followed by projection returns).
double residual_aabb(const SpaceTimeField& psi, double omega, double nu, double mu);

/// Least-squares fit y = c0 + c1 x + c2 x^2.
struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double relative_residual = 0.0;  // ||y - fit||_2 / ||y||_2
};

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sqeddy
