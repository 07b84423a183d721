#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sqeddy/eig.hpp"
#include "sqeddy/operator.hpp"
#include "sqeddy/timestep.hpp"

using namespace sqeddy;

namespace {

const DomainParams P5 = principal_modes(5);

/// exp(M t) a0 through the dense eigendecomposition.
Eigen::VectorXcd exact_flow(const LinearOperator& op, const Eigen::VectorXcd& a0, double t) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix);
  const Eigen::MatrixXcd V = es.eigenvectors();
  const Eigen::VectorXcd coeffs = V.partialPivLu().solve(a0);
  const Eigen::VectorXcd growth = (es.eigenvalues() * t).array().exp();
  return V * growth.cwiseProduct(coeffs);
}

double final_defect(const LinearOperator& op, const CoefficientField& a0, double T, int steps) {
  const Trajectory traj = integrate_linearized(a0, op.nu, op.mu, T / steps, steps, {steps, true});
  const Eigen::VectorXcd ref = exact_flow(op, a0.values(), T);
  return (traj.states.back().values() - ref).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("diagonal dynamics are integrated exactly") {
  const auto modes = ModeSet::lattice(P5, 13);
  const double nu = 0.3, mu = 0.05, dt = 0.1;
  const int steps = 200;
  const Trajectory traj = integrate_linearized(CoefficientField::unit(modes, {7, 8}, cplx(2.0, -1.0)), nu, mu, dt,
                                               steps, {50, false});
  REQUIRE(traj.states.size() == 5);
  const double b = beta(7, 8, 5);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const cplx want = cplx(2.0, -1.0) * std::exp(-(mu + nu * b) * traj.times[i]);
    CHECK(std::abs(traj.states[i].at({7, 8}) - want) <= 1e-14 * std::abs(cplx(2.0, -1.0)));
    CHECK(traj.states[i].at({2, 3}) == cplx{});
  }
}

TEST_CASE("second-order convergence") {
  const LinearOperator op = assemble(ModeSet::lattice(P5, 13), 0.2, 0.01);
  const CoefficientField a0 = CoefficientField::unit(op.modes, {2, 3}) + CoefficientField::unit(op.modes, {7, 2}, 0.3);
  const double T = 20.0;
  const double coarse = final_defect(op, a0, T, 100);
  const double fine = final_defect(op, a0, T, 200);
  const double finer = final_defect(op, a0, T, 400);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
  CHECK(fine / finer == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("time-domain growth agrees with the eigensolver") {
  const auto modes = ModeSet::lattice(P5, 23);
  for (const double nu : {0.17, 0.2064, 0.26}) {
    const double T = 400.0, dt = 1e-3;
    const auto steps = static_cast<int>(T / dt);
    const Trajectory traj = integrate_linearized(CoefficientField::unit(modes, {2, 3}), nu, 0.0, dt, steps, {20, true});
    CHECK_FALSE(traj.warning.has_value());
    const GrowthEstimate est = growth_rate(traj, 0.25 * T);
    const cplx lambda = rightmost_eigenvalue(assemble(modes, nu, 0.0));
    CHECK(est.frequency_reliable);
    CHECK(std::abs(est.growth - lambda.real()) <= 1e-3);
    CHECK(std::abs(est.frequency - std::abs(lambda.imag())) <= 1e-3);
    if (nu < 0.2) CHECK(est.growth > 0.0);
    if (nu > 0.21) CHECK(est.growth < 0.0);
  }
}

TEST_CASE("constant and decaying trajectories") {
  const auto modes = ModeSet::lattice(P5, 8);
  Trajectory flat;
  for (int i = 0; i < 50; ++i) {
    flat.times.push_back(0.1 * i);
    flat.states.push_back(CoefficientField::unit(modes, {2, 3}, 0.7));
  }
  const GrowthEstimate still = growth_rate(flat);
  CHECK(still.growth == doctest::Approx(0.0));
  CHECK(still.frequency == 0.0);

  const Trajectory decay =
      integrate_linearized(CoefficientField::unit(modes, {7, 8}), 2.0, 0.0, 0.05, 100, {1, false});
  const GrowthEstimate est = growth_rate(decay);
  CHECK_FALSE(est.frequency_reliable);
  CHECK(est.growth == doctest::Approx(-2.0 * beta(7, 8, 5)).epsilon(1e-6));
}

TEST_CASE("step guideline") {
  const auto modes = ModeSet::lattice(P5, 23);
  CHECK(step_guideline_ok(*modes, 0.3, 0.0, 1e-3));
  CHECK_FALSE(step_guideline_ok(*modes, 0.2, 0.0, 0.02));
  CHECK_FALSE(step_guideline_ok(*modes, 0.2, 0.0, 1.0));
  const Trajectory traj = integrate_linearized(CoefficientField::unit(modes, {2, 3}), 0.2, 0.0, 1.0, 3);
  CHECK(traj.warning.has_value());
  CHECK(traj.states.size() == 4);
}
