#include "sqeddy/verify.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sqeddy/error.hpp"

namespace sqeddy {

namespace {

bool is_representative(ModeIndex mode) { return mode.n % 2 == 1 && mode.m % 2 == 0; }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

double energy_identity_residual(cplx lambda, const CoefficientField& psi, double nu, double mu) {
  const ModeSet& modes = psi.mode_set();
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double b = modes.beta_at(i);
    const double a2 = std::norm(psi[i]);
    num += (lambda * b + mu * b + nu * b * b) * (b - 2.0) * a2;
    den += (b * b + b) * std::abs(b - 2.0) * a2;
  }
  if (den == 0.0) return 0.0;
  return std::abs(num.real()) / den;
}

double energy_identity_residual(const SpectralSolution& sol) {
  return energy_identity_residual(sol.lambda, sol.vector, sol.nu, sol.mu);
}

CoefficientField conjugate_eigenfunction(const CoefficientField& psi) {
  CoefficientField out(psi.modes());
  const ModeSet& modes = psi.mode_set();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double sign = modes[i].m % 2 == 0 ? 1.0 : -1.0;
    out[i] = sign * (2.0 - modes.beta_at(i)) * std::conj(psi[i]);
  }
  return out;
}

Residual conjugate_residual(const CoefficientField& psi_star, cplx lambda, double nu, double mu) {
  if (psi_star.is_zero()) return {0.0, true};
  const ModeSet& modes = psi_star.mode_set();
  const CoefficientField coupled = apply_L_adjoint(psi_star);
  double worst = 0.0;
  double diag_scale = 0.0;
  const cplx lbar = std::conj(lambda);
  for (std::size_t i = 0; i < psi_star.size(); ++i) {
    const double b = modes.beta_at(i);
    const cplx a = psi_star[i];
    const cplx r = (lbar * b + mu * b + nu * b * b) * a + coupled[i];
    worst = std::max(worst, std::abs(r));
    diag_scale = std::max(diag_scale, (std::abs(lambda) * b + mu * b + nu * b * b) * std::abs(a));
  }
  const double scale = diag_scale + coupled.max_norm();
  return {scale == 0.0 ? 0.0 : worst / scale, false};
}

double symmetry_deviation(const CoefficientField& psi) {
  const double size = psi.max_norm();
  if (size == 0.0) return 0.0;
  const ModeSet& modes = psi.mode_set();
  const cplx i_unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const ModeIndex mode = modes[k];
    if (mode.n % 2 != 0 || mode.m % 2 != 1) continue;
    worst = std::max(worst, std::abs(psi[k] + i_unit * psi.at({mode.m, mode.n})));
  }
  return worst / size;
}

cplx inner_product_closed_form(const CoefficientField& psi) {
  const ModeSet& modes = psi.mode_set();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!is_representative(modes[i])) continue;
    const double b = modes.beta_at(i);
    sum += 2.0 * b * (b - 2.0) * psi[i] * psi[i];
  }
  return sum;
}

cplx crossing_closed_form(const CoefficientField& psi, double nu, double mu) {
  const ModeSet& modes = psi.mode_set();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!is_representative(modes[i])) continue;
    const double b = modes.beta_at(i);
    sum -= 2.0 * (mu * b + nu * b * b) * (b - 2.0) * psi[i] * psi[i];
  }
  return sum;
}

cplx crossing_principal_split(const CoefficientField& psi, double nu, double mu) {
  const ModeSet& modes = psi.mode_set();
  const auto& p = modes.params();
  const double b0 = beta(p.n0, p.m0, p.N);
  const cplx a0 = psi.at({p.n0, p.m0});
  const double sign = p.n0 % 2 == 0 ? 1.0 : -1.0;
  cplx sum = sign * 2.0 * (mu * b0 + nu * b0 * b0) * (b0 - 2.0) * a0 * a0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double b = modes.beta_at(i);
    if (!is_representative(modes[i]) || b <= 2.0) continue;
    sum -= 2.0 * (mu * b + nu * b * b) * (b - 2.0) * psi[i] * psi[i];
  }
  return sum;
}

CrossingQuantities crossing_quantities(const CriticalPoint& cp) {
  const CoefficientField dstar = conjugate_eigenfunction(cp.psi_c).laplacian();
  const cplx den = inner_product(cp.psi_c, dstar);
  if (std::abs(den) < 1e-12) throw NumericalError("(psi_c, Delta psi_c*) vanishes");
  const auto& p = cp.params;
  const double b0 = beta(p.n0, p.m0, p.N);

  CrossingQuantities q;
  q.direct = inner_product(cplx(-cp.mu_c) * cp.psi_c + cplx(cp.nu_c) * cp.psi_c.laplacian(), dstar);
  q.closed_form = crossing_closed_form(cp.psi_c, cp.nu_c, cp.mu_c);
  q.principal_split = crossing_principal_split(cp.psi_c, cp.nu_c, cp.mu_c);
  q.ratio = q.direct / den;
  const CoefficientField shifted = cp.psi_c.laplacian() + cplx(b0) * cp.psi_c;
  q.ratio_shifted = -cp.mu_c - cp.nu_c * b0 + cp.nu_c * inner_product(shifted, dstar) / den;
  return q;
}

SimplicityCount simplicity_count(const DomainParams& params, double omega_c, double nu_c, double mu_c,
                                 int full_cutoff, double window) {
  const auto grid = ModeSet::full_grid(params, full_cutoff);
  const auto values = eigenvalues_blocked(assemble(grid, nu_c, mu_c));
  SimplicityCount count;
  for (const cplx v : values) {
    if (std::abs(v - cplx(0.0, omega_c)) < window) ++count.plus;
    if (std::abs(v - cplx(0.0, -omega_c)) < window) ++count.minus;
  }
  return count;
}

VerificationReport verify_critical(const CriticalPoint& cp, int full_cutoff) {
  VerificationReport r;
  r.energy_residual = energy_identity_residual(cp.lambda(), cp.psi_c, cp.nu_c, cp.mu_c);
  r.conjugate_residual = conjugate_residual(cp.psi_c_star, cp.lambda(), cp.nu_c, cp.mu_c).value;
  r.symmetry_deviation = symmetry_deviation(cp.psi_c);

  const CoefficientField dstar = conjugate_eigenfunction(cp.psi_c).laplacian();
  r.inner_product_direct = inner_product(cp.psi_c, dstar);
  r.inner_product_formula = inner_product_closed_form(cp.psi_c);

  const CrossingQuantities q = crossing_quantities(cp);
  r.crossing_direct = q.direct;
  r.crossing_formula = q.closed_form;
  r.crossing_ratio = q.ratio;

  const SimplicityCount count = simplicity_count(cp.params, cp.omega_c, cp.nu_c, cp.mu_c, full_cutoff);
  r.simplicity_count_plus = count.plus;
  r.simplicity_count_minus = count.minus;
  r.full_cutoff = full_cutoff;
  return r;
}

std::vector<std::string> verification_failures(const VerificationReport& r, const VerificationThresholds& t) {
  std::vector<std::string> out;
  if (!(r.energy_residual <= t.energy)) out.push_back("energy identity residual " + sci(r.energy_residual));
  if (!(r.conjugate_residual <= t.conjugate)) out.push_back("conjugate residual " + sci(r.conjugate_residual));
  if (!(r.symmetry_deviation <= t.symmetry)) out.push_back("symmetry deviation " + sci(r.symmetry_deviation));
  const double ip = std::abs(r.inner_product_direct - r.inner_product_formula);
  if (!(ip <= t.identity * std::abs(r.inner_product_direct))) out.push_back("inner-product identity gap " + sci(ip));
  const double cr = std::abs(r.crossing_direct - r.crossing_formula);
  if (!(cr <= t.identity * std::abs(r.crossing_direct))) out.push_back("crossing identity gap " + sci(cr));
  if (!(std::abs(r.crossing_ratio.real()) > t.transversal)) {
    out.push_back("non-transversal crossing, Re ratio " + sci(r.crossing_ratio.real()));
  }
  if (r.simplicity_count_plus != 1 || r.simplicity_count_minus != 1) {
    out.push_back("simplicity count (" + std::to_string(r.simplicity_count_plus) + ", " +
                  std::to_string(r.simplicity_count_minus) + ") on {1.." + std::to_string(r.full_cutoff) + "}^2");
  }
  return out;
}

}  // namespace sqeddy
