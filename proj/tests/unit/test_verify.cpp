#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "random_fields.hpp"
#include "sqeddy/critical.hpp"
#include "sqeddy/nonlinear.hpp"
#include "sqeddy/operator.hpp"
#include "sqeddy/verify.hpp"

using namespace sqeddy;
using sqeddy::testing::random_field;
using sqeddy::testing::random_symmetric_field;

namespace {

const DomainParams P5 = principal_modes(5);

const CriticalPoint& reference() {
  static const CriticalPoint cp = find_critical(P5, 0.0, {0.15, 0.30}, 43);
  return cp;
}

double relative_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

}  // namespace

TEST_CASE("conjugate eigenfunction coefficients") {
  const auto modes = ModeSet::lattice(P5, 8);
  CoefficientField psi(modes);
  psi.set({2, 3}, 1.0);
  psi.set({7, 8}, cplx(0.0, 1.0));
  const CoefficientField star = conjugate_eigenfunction(psi);
  CHECK(star.at({2, 3}).real() == doctest::Approx(-1.48).epsilon(1e-14));
  CHECK(star.at({2, 3}).imag() == 0.0);
  CHECK(star.at({7, 8}).real() == 0.0);
  CHECK(star.at({7, 8}).imag() == doctest::Approx(2.52).epsilon(1e-14));
  CHECK(star.at({3, 2}) == cplx{});
}

TEST_CASE("conjugate residual") {
  const CriticalPoint& cp = reference();
  const Residual at_c = conjugate_residual(cp.psi_c_star, cp.lambda(), cp.nu_c, cp.mu_c);
  CHECK_FALSE(at_c.degenerate);
  CHECK(at_c.value <= 1e-7);

  std::mt19937_64 rng(31);
  const Residual noise = conjugate_residual(random_field(cp.modes(), rng), cp.lambda(), cp.nu_c, cp.mu_c);
  CHECK(noise.value > 0.05);

  const Residual zero = conjugate_residual(CoefficientField(cp.modes()), cp.lambda(), cp.nu_c, cp.mu_c);
  CHECK(zero.degenerate);
  CHECK(zero.value == 0.0);
}

TEST_CASE("conjugate construction holds for every eigenpair") {
  for (const auto& [nu, mu] : {std::pair{0.2, 0.0}, std::pair{0.27, 0.03}}) {
    const auto pairs = full_spectrum(assemble(ModeSet::lattice(P5, 33), nu, mu));
    double worst = 0.0;
    for (const auto& sol : pairs) {
      worst = std::max(worst, conjugate_residual(conjugate_eigenfunction(sol.vector), sol.lambda, nu, mu).value);
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("conjugate residual tracks the weighted eigen-residual") {
  // r*_i = -(-1)^m beta (2 - beta) conj(r_i) exactly, so the bound holds with
  // the eigen-residual weighted by beta |2 - beta|.
  const double nu = 0.22, mu = 0.01;
  const LinearOperator op = assemble(ModeSet::lattice(P5, 33), nu, mu);
  for (const auto& sol : full_spectrum(op)) {
    const Eigen::VectorXcd r = op.matrix.cast<cplx>() * sol.vector.values() - sol.lambda * sol.vector.values();
    const CoefficientField star = conjugate_eigenfunction(sol.vector);
    const CoefficientField coupled = apply_L_adjoint(star);
    double conj_res = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < star.size(); ++i) {
      const double b = op.modes->beta_at(i);
      conj_res = std::max(conj_res, std::abs((std::conj(sol.lambda) * b + mu * b + nu * b * b) * star[i] + coupled[i]));
      weighted = std::max(weighted, b * std::abs(2.0 - b) * std::abs(r[static_cast<Eigen::Index>(i)]));
    }
    CHECK(conj_res <= 10.0 * weighted + 1e-13);
  }
}

TEST_CASE("adjoint check on random full-grid pairs") {
  std::mt19937_64 rng(32);
  const auto grid = ModeSet::full_grid(P5, 16);
  for (int trial = 0; trial < 100; ++trial) {
    const auto phi = random_field(grid, rng);
    const auto chi = random_field(grid, rng);
    const cplx lhs = inner_product(apply_L(phi), chi);
    const cplx rhs = inner_product(phi, apply_L_adjoint(chi));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("adjoint coupling through the Jacobian") {
  std::mt19937_64 rng(33);
  const auto grid = ModeSet::full_grid(P5, 20);
  const auto psi0 = CoefficientField::unit(ModeSet::full_grid(P5, 5), {5, 5});
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_field(grid, rng);
    const CoefficientField J = jacobian_bracket(psi0, psi, grid);
    const CoefficientField route = cplx(-1.0) * (J.laplacian() + cplx(2.0) * J);
    const CoefficientField direct = apply_L_adjoint(psi);
    CHECK((route.values() - direct.values()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, direct.max_norm()));
  }
}

TEST_CASE("energy identity") {
  const auto pairs = full_spectrum(assemble(ModeSet::lattice(P5, 33), 0.23, 0.02));
  for (const auto& sol : pairs) CHECK(energy_identity_residual(sol) <= 1e-8);

  // Purely oscillatory data without dissipation has no real part at all.
  const auto modes = ModeSet::lattice(P5, 8);
  CHECK(energy_identity_residual(cplx(0.0, 0.3), CoefficientField::unit(modes, {2, 7}, cplx(0.3, 0.4)), 0.0, 0.0) == 0.0);
  CHECK(energy_identity_residual(cplx(1.0, 0.0), CoefficientField(modes), 0.2, 0.0) == 0.0);
  // A non-eigenpair is detected.
  std::mt19937_64 rng(34);
  CHECK(energy_identity_residual(cplx(0.1, 0.0), random_field(modes, rng), 0.2, 0.0) > 1e-3);
}

TEST_CASE("symmetry of the critical eigenvector") {
  const CriticalPoint& cp = reference();
  CHECK(symmetry_deviation(cp.psi_c) <= 1e-8);
  std::mt19937_64 rng(35);
  CHECK(symmetry_deviation(random_symmetric_field(cp.modes(), rng)) <= 1e-15);
  CHECK(symmetry_deviation(random_field(cp.modes(), rng)) > 0.1);
}

TEST_CASE("inner-product closed form") {
  const CriticalPoint& cp = reference();
  const cplx direct = inner_product(cp.psi_c, conjugate_eigenfunction(cp.psi_c).laplacian());
  CHECK(relative_gap(direct, inner_product_closed_form(cp.psi_c)) <= 1e-9);

  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = random_symmetric_field(cp.modes(), rng);
    const cplx d = inner_product(psi, conjugate_eigenfunction(psi).laplacian());
    CHECK(relative_gap(d, inner_product_closed_form(psi)) <= 1e-10);
  }

  // The closed form squares the coefficients; a modulus-squared version differs.
  const auto psi = random_symmetric_field(cp.modes(), rng);
  cplx modulus = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const ModeIndex mode = (*cp.modes())[i];
    if (mode.n % 2 == 1 && mode.m % 2 == 0) {
      const double b = cp.modes()->beta_at(i);
      modulus += 2.0 * b * (b - 2.0) * std::norm(psi[i]);
    }
  }
  CHECK(relative_gap(modulus, inner_product_closed_form(psi)) > 1e-3);
}

TEST_CASE("crossing closed forms") {
  const auto modes = ModeSet::lattice(P5, 8);
  CoefficientField psi(modes);
  psi.set({3, 2}, 1.0);
  psi.set({2, 3}, cplx(0.0, -1.0));
  const double nu = 0.25;
  const double b = beta(3, 2, 5);
  const cplx closed = crossing_closed_form(psi, nu, 0.0);
  CHECK(std::abs(closed - (-2.0 * nu * b * b * (b - 2.0))) <= 1e-15);
  const cplx direct = inner_product(cplx(nu) * psi.laplacian(), conjugate_eigenfunction(psi).laplacian());
  CHECK(std::abs(direct - closed) <= 1e-15);

  std::mt19937_64 rng(37);
  const auto lattice = ModeSet::lattice(P5, 33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_symmetric_field(lattice, rng);
    const cplx d = inner_product(cplx(-0.01) * f + cplx(0.2) * f.laplacian(), conjugate_eigenfunction(f).laplacian());
    CHECK(relative_gap(d, crossing_closed_form(f, 0.2, 0.01)) <= 1e-9);
    CHECK(relative_gap(d, crossing_principal_split(f, 0.2, 0.01)) <= 1e-9);
  }
}

TEST_CASE("crossing quantities at the critical point") {
  const CriticalPoint& cp = reference();
  const CrossingQuantities q = crossing_quantities(cp);
  CHECK(relative_gap(q.direct, q.closed_form) <= 1e-9);
  CHECK(relative_gap(q.direct, q.principal_split) <= 1e-9);
  CHECK(std::abs(q.ratio - cp.crossing_derivative) <= 1e-12);
  CHECK(std::abs(q.ratio - q.ratio_shifted) <= 1e-10);
  CHECK(std::abs(q.ratio.real()) > 1e-6);
}

TEST_CASE("simplicity on the full grid") {
  const CriticalPoint& cp = reference();
  for (const int K : {40, 45}) {
    const SimplicityCount c = simplicity_count(P5, cp.omega_c, cp.nu_c, cp.mu_c, K);
    CHECK(c.plus == 1);
    CHECK(c.minus == 1);
    const SimplicityCount wide = simplicity_count(P5, cp.omega_c, cp.nu_c, cp.mu_c, K, 1e-5);
    CHECK(wide.plus == c.plus);
    CHECK(wide.minus == c.minus);
  }
  const SimplicityCount off = simplicity_count(P5, cp.omega_c, 0.3, 0.0, 40);
  CHECK(off.plus == 0);
  CHECK(off.minus == 0);
}

TEST_CASE("full report") {
  const CriticalPoint& cp = reference();
  const VerificationReport report = verify_critical(cp, 40);
  CHECK(verification_failures(report).empty());
  CHECK(report.full_cutoff == 40);

  VerificationReport broken = report;
  broken.simplicity_count_plus = 2;
  broken.energy_residual = 1.0;
  CHECK(verification_failures(broken).size() == 2);
}
