#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqeddy/critical.hpp"
#include "sqeddy/eig.hpp"
#include "sqeddy/error.hpp"

using namespace sqeddy;

namespace {

const DomainParams P5 = principal_modes(5);

const CriticalPoint& reference() {
  static const CriticalPoint cp = find_critical(P5, 0.0, {0.15, 0.30}, 43);
  return cp;
}

cplx branch_eigenvalue(const ModeSetPtr& modes, double nu, double mu, double omega) {
  return nearest(assemble(modes, nu, mu), cplx(0.0, -omega)).lambda;
}

}  // namespace

TEST_CASE("critical point agrees with the published values") {
  const CriticalPoint& cp = reference();
  CHECK(std::abs(cp.omega_c - 0.1397) / 0.1397 <= 1e-3);
  CHECK(std::abs(cp.nu_c - 0.2064) / 0.2064 <= 1e-3);
  CHECK(cp.mu_c == 0.0);
  CHECK(cp.cutoff == 43);
  CHECK(cp.omega_c > 0.0);
  CHECK(cp.psi_c.at({2, 3}) == cplx(1.0, 0.0));
  const CoefficientField dstar = cp.psi_c_star.laplacian();
  CHECK(std::abs(inner_product(cp.psi_c, dstar) - 1.0) <= 1e-12);
}

TEST_CASE("root certificate") {
  const CriticalPoint& cp = reference();
  const auto& modes = cp.modes();
  CHECK(std::abs(rightmost_at(modes, cp.nu_c, 0.0).real()) <= 1e-10);
  CHECK(rightmost_at(modes, cp.nu_c - 1e-6, 0.0).real() > 0.0);
  CHECK(rightmost_at(modes, cp.nu_c + 1e-6, 0.0).real() < 0.0);

  // Exactly one conjugate pair on the axis.
  const auto values = eigenvalues(assemble(modes, cp.nu_c, 0.0));
  int on_axis = 0;
  for (const cplx v : values) on_axis += std::abs(v.real()) < 1e-8;
  CHECK(on_axis == 2);
  CHECK(std::abs(values[0].imag() - cp.omega_c) <= 1e-10);
}

TEST_CASE("crossing derivative matches a central difference") {
  const CriticalPoint& cp = reference();
  const double h = 1e-4;
  const cplx up = branch_eigenvalue(cp.modes(), cp.nu_c * (1.0 + h), 0.0, cp.omega_c);
  const cplx down = branch_eigenvalue(cp.modes(), cp.nu_c * (1.0 - h), 0.0, cp.omega_c);
  const cplx fd = (up - down) / (2.0 * h);
  CHECK(std::abs(fd - cp.crossing_derivative) <= 1e-5);
  CHECK(std::abs(cp.crossing_derivative.real()) > 1e-6);
  // Increasing the viscosity stabilises.
  CHECK(cp.crossing_derivative.real() < 0.0);
}

TEST_CASE("bracket without a sign change is rejected") {
  CHECK_THROWS_AS(find_critical(P5, 0.0, {0.3, 0.4}, 23), NumericalError);
  CHECK_THROWS_AS(find_critical(P5, 0.0, {0.21, 0.15}, 23), ConfigError);
}

TEST_CASE("cutoff convergence of the critical pair") {
  const CriticalPoint& a = reference();
  const CriticalPoint b = find_critical(P5, 0.0, {0.15, 0.30}, 43 + 2 * P5.N);
  CHECK(std::abs(a.omega_c - b.omega_c) <= 1e-6);
  CHECK(std::abs(a.nu_c - b.nu_c) <= 1e-6);
}

TEST_CASE("ray root with mu = 0 reduces to the viscosity root") {
  const CriticalPoint& cp = reference();
  const CriticalPoint ray = find_critical_on_ray(P5, 0.25, 0.0, {0.6, 1.2}, 43);
  CHECK(std::abs(ray.nu_c - cp.nu_c) <= 1e-9);
  CHECK(std::abs(ray.omega_c - cp.omega_c) <= 1e-9);
}

TEST_CASE("friction shifts the critical viscosity down") {
  const CriticalPoint with_mu = find_critical(P5, 0.005, {0.05, 0.30}, 33);
  const CriticalPoint without = find_critical(P5, 0.0, {0.05, 0.30}, 33);
  CHECK(with_mu.nu_c < without.nu_c);
  CHECK(std::abs(rightmost_at(with_mu.modes(), with_mu.nu_c, 0.005).real()) <= 1e-9);
  const CriticalPoint ray = find_critical_on_ray(P5, with_mu.nu_c, 0.005, {0.8, 1.2}, 33);
  CHECK(std::abs(ray.nu_c - with_mu.nu_c) <= 1e-8);
}

TEST_CASE("critical_point_at reproduces the root") {
  const CriticalPoint& cp = reference();
  const CriticalPoint again = critical_point_at(P5, cp.nu_c, 0.0, 43);
  CHECK(again.omega_c == cp.omega_c);
  CHECK((again.psi_c.values() - cp.psi_c.values()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(again.crossing_derivative == cp.crossing_derivative);
}

TEST_CASE("sweep ordering and values") {
  const std::vector<double> nus{0.15, 0.2, 0.3};
  const std::vector<int> cutoffs{13, 23};
  const auto rows = sweep(P5, 0.0, nus, cutoffs);
  REQUIRE(rows.size() == 6);
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    for (std::size_t i = 0; i < nus.size(); ++i) {
      const SweepRow& row = rows[k * nus.size() + i];
      CHECK(row.cutoff == cutoffs[k]);
      CHECK(row.nu == nus[i]);
      CHECK(row.lambda == rightmost_at(ModeSet::lattice(P5, cutoffs[k]), nus[i], 0.0));
    }
  }
}
