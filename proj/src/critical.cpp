#include "sqeddy/critical.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "sqeddy/error.hpp"
#include "sqeddy/verify.hpp"

namespace sqeddy {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Safeguarded secant (Illinois) on f over [a, b] with f(a) f(b) < 0.
double bracketed_root(const std::function<double(double)>& f, double a, double b, const RootOptions& opt) {
  double fa = f(a);
  double fb = f(b);
  if (!(fa * fb < 0.0)) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    throw NumericalError("no sign change of Re lambda on [" + fmt(a) + ", " + fmt(b) + "]: " + fmt(fa) + ", " +
                         fmt(fb));
  }
  int side = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (!(c > lo && c < hi)) c = 0.5 * (a + b);
    const double fc = f(c);
    if (std::abs(fc) < opt.tolerance || hi - lo < 1e-15 * std::max(1.0, std::abs(c))) return c;
    if (fc * fb < 0.0) {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      side = 0;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  throw NumericalError("critical-point root finding did not converge in " + std::to_string(opt.max_iterations) +
                       " iterations");
}

CriticalPoint build_point(const DomainParams& params, double nu, double mu, int cutoff, const RootOptions& opt) {
  const auto modes = ModeSet::lattice(params, cutoff);
  const LinearOperator op = assemble(modes, nu, mu);
  const auto values = eigenvalues(op);
  if (values.empty()) throw NumericalError("empty lattice");
  const cplx top = values.front();
  if (std::abs(top.imag()) < opt.axis_tolerance) {
    throw NumericalError("rightmost eigenvalue is real at nu = " + fmt(nu) + ", mu = " + fmt(mu) +
                         " (steady crossing, not a Hopf point)");
  }
  int on_axis = 0;
  for (const cplx v : values) {
    if (std::abs(v.real() - top.real()) < opt.axis_tolerance) ++on_axis;
  }
  if (on_axis != 2) {
    throw NumericalError(std::to_string(on_axis) + " eigenvalues share the rightmost real part at nu = " + fmt(nu) +
                         "; expected one conjugate pair");
  }

  const SpectralSolution sol = nearest(op, cplx(top.real(), -std::abs(top.imag())));
  CriticalPoint cp;
  cp.params = params;
  cp.cutoff = cutoff;
  cp.nu_c = nu;
  cp.mu_c = mu;
  cp.omega_c = -sol.lambda.imag();
  cp.psi_c = sol.vector;

  CoefficientField star = conjugate_eigenfunction(cp.psi_c);
  const cplx d = inner_product(cp.psi_c, star.laplacian());
  if (std::abs(d) < 1e-12) throw NumericalError("(psi_c, Delta psi_c*) vanishes; critical eigenvalue not simple");
  star *= 1.0 / std::conj(d);
  cp.psi_c_star = std::move(star);
  sigma_derivative(cp);
  return cp;
}

}  // namespace

cplx rightmost_at(const ModeSetPtr& modes, double nu, double mu) {
  return rightmost_eigenvalue(assemble(modes, nu, mu));
}

CriticalPoint find_critical(const DomainParams& params, double mu, std::pair<double, double> nu_bracket, int cutoff,
                            const RootOptions& options) {
  if (!(nu_bracket.first > 0.0 && nu_bracket.second > nu_bracket.first)) {
    throw ConfigError("nu bracket must satisfy 0 < nu_min < nu_max");
  }
  const auto modes = ModeSet::lattice(params, cutoff);
  auto f = [&](double nu) { return rightmost_at(modes, nu, mu).real(); };
  const double nu_c = bracketed_root(f, nu_bracket.first, nu_bracket.second, options);
  return build_point(params, nu_c, mu, cutoff, options);
}

CriticalPoint find_critical_on_ray(const DomainParams& params, double nu_ref, double mu_ref,
                                   std::pair<double, double> sigma_bracket, int cutoff, const RootOptions& options) {
  if (nu_ref < 0.0 || mu_ref < 0.0 || (nu_ref == 0.0 && mu_ref == 0.0)) {
    throw ConfigError("ray direction (nu_ref, mu_ref) must be non-negative and nonzero");
  }
  if (!(sigma_bracket.first > 0.0 && sigma_bracket.second > sigma_bracket.first)) {
    throw ConfigError("sigma bracket must satisfy 0 < sigma_min < sigma_max");
  }
  const auto modes = ModeSet::lattice(params, cutoff);
  auto f = [&](double s) { return rightmost_at(modes, s * nu_ref, s * mu_ref).real(); };
  const double s = bracketed_root(f, sigma_bracket.first, sigma_bracket.second, options);
  return build_point(params, s * nu_ref, s * mu_ref, cutoff, options);
}

cplx sigma_derivative(CriticalPoint& cp) {
  const CoefficientField dstar = cp.psi_c_star.laplacian();
  const cplx den = inner_product(cp.psi_c, dstar);
  if (std::abs(den) < 1e-12) throw NumericalError("(psi_c, Delta psi_c*) vanishes");
  const CoefficientField num_field = cplx(-cp.mu_c) * cp.psi_c + cplx(cp.nu_c) * cp.psi_c.laplacian();
  cp.crossing_derivative = inner_product(num_field, dstar) / den;
  return cp.crossing_derivative;
}

CriticalPoint critical_point_at(const DomainParams& params, double nu_c, double mu_c, int cutoff,
                                const RootOptions& options) {
  if (nu_c <= 0.0 || mu_c < 0.0) throw ConfigError("critical_point_at needs nu > 0 and mu >= 0");
  return build_point(params, nu_c, mu_c, cutoff, options);
}

std::vector<SweepRow> sweep(const DomainParams& params, double mu, const std::vector<double>& nus,
                            const std::vector<int>& cutoffs) {
  std::vector<ModeSetPtr> sets;
  sets.reserve(cutoffs.size());
  for (const int K : cutoffs) sets.push_back(ModeSet::lattice(params, K));
  const auto n_nu = static_cast<std::ptrdiff_t>(nus.size());
  const auto total = static_cast<std::ptrdiff_t>(nus.size() * cutoffs.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(total));
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    const auto ki = static_cast<std::size_t>(t / n_nu);
    const auto ni = static_cast<std::size_t>(t % n_nu);
    try {
      rows[static_cast<std::size_t>(t)] = SweepRow{nus[ni], cutoffs[ki], rightmost_at(sets[ki], nus[ni], mu)};
    } catch (const std::exception&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw NumericalError("sweep: eigenvalue computation failed");
  return rows;
}

}  // namespace sqeddy
