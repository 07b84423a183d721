#include "sqeddy/hopf.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "sqeddy/kernels.hpp"

namespace sqeddy {

namespace {

constexpr double kRangeTolerance = 1e-8;
constexpr double kSingularRcond = 1e-13;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

HopfProblem::HopfProblem(const CriticalPoint& cp, int time_modes)
    : cp_(cp), modes_(ModeSet::full_grid(cp.params, cp.cutoff)), F_(time_modes) {
  if (time_modes < 1) throw ConfigError("time truncation F must be >= 1");
  op_ = assemble(modes_, cp.nu_c, cp.mu_c);
  psi_c_ = cp.psi_c.embed(modes_);
  dstar_ = cp.psi_c_star.embed(modes_).laplacian();
  denominator_ = inner_product(psi_c_, dstar_);
  if (std::abs(denominator_ - 1.0) > 1e-8) {
    throw ConfigError("critical point is not normalised: (psi_c, Delta psi_c*) = " + sci(std::abs(denominator_)));
  }
  phi_c_ = SpaceTimeField(modes_, F_);
  phi_c_.component(-1) = psi_c_.values();
  phi_c_.component(1) = psi_c_.values().conjugate();

  // Coupling components, with every component meeting the lattice of cp
  // merged into the single block that carries the critical direction.
  Block critical_block{{}, true};
  for (const auto& comp : coupling_components(*modes_)) {
    const bool on_lattice = in_influence_lattice(cp.params, (*modes_)[comp.front()]);
    Block& target = on_lattice ? critical_block : blocks_.emplace_back();
    for (const std::size_t i : comp) target.rows.push_back(static_cast<Eigen::Index>(i));
  }
  std::sort(critical_block.rows.begin(), critical_block.rows.end());
  blocks_.push_back(std::move(critical_block));

  const auto n_blocks = static_cast<int>(blocks_.size());
  lu_.assign(static_cast<std::size_t>(F_ + 1), std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>>(blocks_.size()));
  const int jobs = (F_ + 1) * n_blocks;
  std::vector<double> rcond(static_cast<std::size_t>(jobs), 1.0);
#pragma omp parallel for schedule(dynamic, 1)
  for (int job = 0; job < jobs; ++job) {
    const int k = job / n_blocks;
    const int b = job % n_blocks;
    const Block& blk = blocks_[static_cast<std::size_t>(b)];
    const auto n = static_cast<Eigen::Index>(blk.rows.size());
    const bool bordered = blk.critical && k == 1;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n + (bordered ? 1 : 0), n + (bordered ? 1 : 0));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = op_.matrix(blk.rows[i], blk.rows[j]);
      A(i, i) -= cplx(0.0, cp_.omega_c * k);
    }
    if (bordered) {
      for (Eigen::Index i = 0; i < n; ++i) {
        A(i, n) = std::conj(psi_c_[static_cast<std::size_t>(blk.rows[i])]);
        A(n, i) = dstar_[static_cast<std::size_t>(blk.rows[i])];
      }
    }
    auto& lu = lu_[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
    lu.compute(A);
    rcond[static_cast<std::size_t>(job)] = lu.rcond();
  }
  for (int job = 0; job < jobs; ++job) {
    if (rcond[static_cast<std::size_t>(job)] < kSingularRcond) {
      throw NumericalError("resolvent at time frequency k = " + std::to_string(job / n_blocks) +
                           " is singular (rcond " + sci(rcond[static_cast<std::size_t>(job)]) +
                           "): second resonance");
    }
  }
}

cplx HopfProblem::pairing_minus(const SpaceTimeField& X) const {
  return dstar_.values().dot(X.component(-1));
}

cplx HopfProblem::pairing_plus(const SpaceTimeField& X) const {
  return dstar_.values().conjugate().dot(X.component(1));
}

SpaceTimeField HopfProblem::project_P(const SpaceTimeField& X) const {
  SpaceTimeField out = X;
  out.component(-1) -= pairing_minus(X) * psi_c_.values();
  out.component(1) -= pairing_plus(X) * psi_c_.values().conjugate();
  return out;
}

SpaceTimeField HopfProblem::dissipation(const SpaceTimeField& X) const {
  SpaceTimeField out(X.modes(), X.F());
  const auto& modes = X.mode_set();
  for (Eigen::Index i = 0; i < X.data().rows(); ++i) {
    out.data().row(i) = (-cp_.mu_c - cp_.nu_c * modes.beta_at(static_cast<std::size_t>(i))) * X.data().row(i);
  }
  return out;
}

double HopfProblem::f_epsilon(const BranchState& state, double eps, const SpaceTimeField& advected) const {
  const cplx R = cp_.crossing_derivative;
  if (std::abs(R.real()) < 1e-14) throw NumericalError("crossing ratio has vanishing real part");
  const cplx Xp = pairing_minus(dissipation(state.phi)) / denominator_;
  const cplx Jp = pairing_minus(advected) / denominator_;
  return -(state.sigma_shift * Xp.real() + eps * Jp.real()) / R.real();
}

double HopfProblem::f_epsilon(const BranchState& state, double eps) const {
  return f_epsilon(state, eps, advection(phi_c_ + state.phi));
}

double HopfProblem::g_epsilon(const BranchState& state, double eps, double f, const SpaceTimeField& advected) const {
  const cplx R = cp_.crossing_derivative;
  const cplx Xp = pairing_minus(dissipation(state.phi)) / denominator_;
  const cplx Jp = pairing_minus(advected) / denominator_;
  return -f * R.imag() - state.sigma_shift * Xp.imag() - eps * Jp.imag();
}

double HopfProblem::g_epsilon(const BranchState& state, double eps, double f) const {
  return g_epsilon(state, eps, f, advection(phi_c_ + state.phi));
}

SpaceTimeField HopfProblem::forcing(const BranchState& state, double eps, double f, double g,
                                    const SpaceTimeField& advected) const {
  SpaceTimeField out = cplx(-state.omega_shift) * time_derivative(state.phi);
  out += cplx(state.sigma_shift) * dissipation(state.phi);
  out += cplx(-g) * time_derivative(phi_c_);
  out += cplx(f) * dissipation(phi_c_);
  out += cplx(eps) * advected;
  return out;
}

void HopfProblem::solve_frequency(int k, const Eigen::VectorXcd& rhs, Eigen::Ref<Eigen::VectorXcd> out) const {
  // M is real, so the system at -k is the conjugate of the one at k.
  const bool flip = k < 0;
  const auto& factors = lu_[static_cast<std::size_t>(std::abs(k))];
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Block& blk = blocks_[b];
    const auto n = static_cast<Eigen::Index>(blk.rows.size());
    const bool bordered = blk.critical && std::abs(k) == 1;
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n + (bordered ? 1 : 0));
    bool any = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx v = rhs[blk.rows[i]];
      r[i] = flip ? std::conj(v) : v;
      any = any || v != cplx{};
    }
    if (!any) {
      for (Eigen::Index i = 0; i < n; ++i) out[blk.rows[i]] = 0.0;
      continue;
    }
    const Eigen::VectorXcd x = factors[b].solve(r);
    for (Eigen::Index i = 0; i < n; ++i) out[blk.rows[i]] = flip ? std::conj(x[i]) : x[i];
  }
}

SpaceTimeField HopfProblem::resolvent_apply(const SpaceTimeField& rhs) const {
  if (rhs.F() != F_ || rhs.mode_set().size() != modes_->size()) {
    throw ConfigError("resolvent_apply: right-hand side on a different truncation");
  }
  const double scale = std::max(1.0, rhs.max_norm());
  const double pm = std::abs(pairing_minus(rhs));
  const double pp = std::abs(pairing_plus(rhs));
  if (pm > kRangeTolerance * scale || pp > kRangeTolerance * scale) {
    throw NumericalError("right-hand side is not in the range of P (critical pairings " + sci(pm) + ", " + sci(pp) +
                         ")");
  }
  SpaceTimeField out(modes_, F_);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = -F_; k <= F_; ++k) {
    const Eigen::VectorXcd r = rhs.component(k);
    Eigen::VectorXcd x(r.size());
    solve_frequency(k, r, x);
    out.component(k) = x;
  }
  return out;
}

BranchPoint HopfProblem::solve_branch(double eps, const BranchOptions& options) const {
  BranchPoint point;
  point.epsilon = eps;
  point.omega = cp_.omega_c;
  point.sigma = 1.0;
  point.phi = SpaceTimeField(modes_, F_);
  if (eps == 0.0) return point;

  BranchState state{0.0, 0.0, SpaceTimeField(modes_, F_)};
  auto snapshot = [&](int iterations) {
    point.sigma = 1.0 + state.sigma_shift;
    point.omega = cp_.omega_c + state.omega_shift;
    point.phi = state.phi;
    point.iterations = iterations;
  };

  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const SpaceTimeField advected = advection(phi_c_ + state.phi);
    const double f = f_epsilon(state, eps, advected);
    const double g = g_epsilon(state, eps, f, advected);
    const SpaceTimeField Phi = forcing(state, eps, f, g, advected);

    const double orth = std::max(std::abs(pairing_minus(Phi)), std::abs(pairing_plus(Phi)));
    point.max_orthogonality = std::max(point.max_orthogonality, orth);
    if (orth > options.orthogonality_tolerance) {
      snapshot(it - 1);
      throw BranchFailure("<Phi, Delta phi_c*> = " + sci(orth) + " at iteration " + std::to_string(it) +
                              ", eps = " + sci(eps),
                          point);
    }

    SpaceTimeField next = resolvent_apply(cplx(-1.0) * Phi);
    const double change =
        std::abs(f - state.sigma_shift) + std::abs(g - state.omega_shift) + (next - state.phi).weighted_norm();
    state = BranchState{f, g, std::move(next)};
    point.changes.push_back(change);

    if (change <= options.tolerance) {
      snapshot(it);
      break;
    }
    growth = change > previous ? growth + 1 : 0;
    previous = change;
    if (growth >= options.divergence_window) {
      snapshot(it);
      throw BranchFailure("branch iteration diverges at eps = " + sci(eps) + " (change " + sci(change) +
                              " after " + std::to_string(it) + " iterations)",
                          point);
    }
    if (it == options.max_iterations) {
      snapshot(it);
      throw BranchFailure("branch iteration hit the cap of " + std::to_string(it) + " at eps = " + sci(eps) +
                              " (change " + sci(change) + ")",
                          point);
    }
  }

  for (std::size_t i = 3; i < point.changes.size(); ++i) {
    if (point.changes[i - 1] > 1e3 * options.tolerance) {
      point.contraction_factor = std::max(point.contraction_factor, point.changes[i] / point.changes[i - 1]);
    }
  }
  point.residual_aabb =
      residual_aabb(reconstruct(point), point.omega, point.sigma * cp_.nu_c, point.sigma * cp_.mu_c);
  return point;
}

std::array<double, 3> HopfProblem::pairing_identity_defects(const SpaceTimeField& phi) const {
  const CoefficientField dpsi = cplx(-cp_.mu_c) * psi_c_ + cplx(cp_.nu_c) * psi_c_.laplacian();
  return {
      std::abs(pairing_minus(time_derivative(phi))),
      std::abs(pairing_minus(time_derivative(phi_c_)) - cplx(0.0, -1.0) * denominator_),
      std::abs(pairing_minus(dissipation(phi_c_)) - inner_product(dpsi, dstar_)),
  };
}

SpaceTimeField HopfProblem::reconstruct(const BranchPoint& point) const {
  return cplx(point.epsilon) * (phi_c_ + point.phi);
}

double residual_aabb(const SpaceTimeField& psi, double omega, double nu, double mu) {
  const auto& modes = psi.mode_set();
  const auto M = static_cast<Eigen::Index>(modes.size());
  Eigen::Map<const Eigen::VectorXd> b(modes.betas().data(), M);

  std::array<Eigen::MatrixXcd, 5> terms;
  terms[0] = cplx(-omega) * time_derivative(psi).data();
  terms[1] = (-nu * b).cast<cplx>().asDiagonal() * psi.data();
  terms[2] = cplx(-mu) * psi.data();
  terms[3] = Eigen::MatrixXcd::Zero(M, psi.data().cols());
  for (Eigen::Index c = 0; c < psi.data().cols(); ++c) {
    Eigen::VectorXcd in = psi.data().col(c);
    Eigen::VectorXcd out(M);
    kernels::parallel::apply_coupling(modes, {in.data(), static_cast<std::size_t>(M)},
                                      {out.data(), static_cast<std::size_t>(M)});
    terms[3].col(c) = out;
  }
  terms[4] = advection(psi).data();

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(M, psi.data().cols());
  double scale = 0.0;
  for (const auto& t : terms) {
    total += t;
    if (t.size() > 0) scale = std::max(scale, t.cwiseAbs().maxCoeff());
  }
  if (scale == 0.0) return 0.0;
  return total.cwiseAbs().maxCoeff() / scale;
}

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw ConfigError("quadratic fit needs >= 3 matching samples");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(n, 3);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    V(i, 0) = 1.0;
    V(i, 1) = xi;
    V(i, 2) = xi * xi;
    Y[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c = V.colPivHouseholderQr().solve(Y);
  QuadraticFit fit{c[0], c[1], c[2], 0.0};
  const double ny = Y.norm();
  fit.relative_residual = ny == 0.0 ? 0.0 : (Y - V * c).norm() / ny;
  return fit;
}

}  // namespace sqeddy
