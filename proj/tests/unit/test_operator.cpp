#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "random_fields.hpp"
#include "sqeddy/eig.hpp"
#include "sqeddy/error.hpp"
#include "sqeddy/operator.hpp"

using namespace sqeddy;
using sqeddy::testing::random_field;

namespace {

const DomainParams P5 = principal_modes(5);
constexpr double kNuC = 0.20638384188128903;  // converged critical viscosity, checked in test_critical

}  // namespace

TEST_CASE("diagonal entries") {
  const auto modes = ModeSet::lattice(P5, 23);
  const LinearOperator op = assemble(modes, 0.2, 0.0);
  const auto i = static_cast<Eigen::Index>(*modes->find({2, 3}));
  CHECK(op.matrix(i, i) == doctest::Approx(-0.104).epsilon(1e-14));

  const LinearOperator withmu = assemble(modes, 0.2, 0.05);
  CHECK(withmu.matrix(i, i) == doctest::Approx(-0.154).epsilon(1e-14));

  const LinearOperator bare = assemble(modes, 0.0, 0.0);
  CHECK(bare.matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("row (2,3) couples to the four stencil targets") {
  const auto modes = ModeSet::lattice(P5, 23);
  const LinearOperator op = assemble(modes, 0.0, 0.0);
  const auto row = static_cast<Eigen::Index>(*modes->find({2, 3}));
  std::set<ModeIndex> targets;
  for (Eigen::Index j = 0; j < op.dim(); ++j) {
    if (op.matrix(row, j) != 0.0) targets.insert((*modes)[static_cast<std::size_t>(j)]);
  }
  CHECK(targets == std::set<ModeIndex>{{3, 2}, {7, 8}, {3, 8}, {7, 2}});
  const auto j32 = static_cast<Eigen::Index>(*modes->find({3, 2}));
  const double expected = (beta(3, 2, 5) - 2.0) / (20.0 * beta(2, 3, 5));
  CHECK(op.matrix(row, j32) == doctest::Approx(expected).epsilon(1e-14));
  const auto j78 = static_cast<Eigen::Index>(*modes->find({7, 8}));
  CHECK(op.matrix(row, j78) == doctest::Approx(-(beta(7, 8, 5) - 2.0) / (20.0 * beta(2, 3, 5))).epsilon(1e-14));
}

TEST_CASE("every row has at most four off-diagonal entries") {
  const auto modes = ModeSet::lattice(P5, 43);
  const LinearOperator op = assemble(modes, 0.3, 0.1);
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    int count = 0;
    for (Eigen::Index j = 0; j < op.dim(); ++j) count += (i != j && op.matrix(i, j) != 0.0);
    CHECK(count <= 4);
  }
}

TEST_CASE("negative parameters are rejected") {
  const auto modes = ModeSet::lattice(P5, 13);
  CHECK_THROWS_AS(assemble(modes, -0.1, 0.0), ConfigError);
  CHECK_THROWS_AS(assemble(modes, 0.1, -1.0), ConfigError);
}

TEST_CASE("apply_L support and linearity") {
  const auto modes = ModeSet::lattice(P5, 23);
  const CoefficientField out = apply_L(CoefficientField::unit(modes, {2, 3}));
  const std::set<ModeIndex> allowed{{3, 2}, {7, 8}, {3, 8}, {7, 2}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] != cplx{}) CHECK(allowed.count((*modes)[i]) == 1);
  }
  CHECK(apply_L(CoefficientField(modes)).is_zero());
}

TEST_CASE("matrix-free apply_L matches the assembled coupling") {
  std::mt19937_64 rng(11);
  for (const auto& modes : {ModeSet::lattice(P5, 33), ModeSet::full_grid(P5, 20)}) {
    const LinearOperator bare = assemble(modes, 0.0, 0.0);
    for (int trial = 0; trial < 5; ++trial) {
      const CoefficientField psi = random_field(modes, rng);
      const Eigen::VectorXcd Ca = bare.matrix.cast<cplx>() * psi.values();
      const CoefficientField Lpsi = apply_L(psi);
      double worst = 0.0;
      for (std::size_t i = 0; i < psi.size(); ++i) {
        worst = std::max(worst, std::abs(Lpsi[i] - (-modes->beta_at(i)) * Ca[static_cast<Eigen::Index>(i)]));
      }
      CHECK(worst <= 1e-13);
    }
  }
}

TEST_CASE("adjoint coupling is the transpose") {
  std::mt19937_64 rng(12);
  const auto grid = ModeSet::full_grid(P5, 18);
  for (int trial = 0; trial < 10; ++trial) {
    const CoefficientField phi = random_field(grid, rng);
    const CoefficientField chi = random_field(grid, rng);
    const cplx lhs = inner_product(apply_L(phi), chi);
    const cplx rhs = inner_product(phi, apply_L_adjoint(chi));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * phi.values().norm() * chi.values().norm());
  }
}

TEST_CASE("spectrum is closed under conjugation") {
  const auto modes = ModeSet::lattice(P5, 33);
  const auto values = eigenvalues(assemble(modes, 0.21, 0.02));
  for (const cplx v : values) {
    double best = 1e300;
    for (const cplx w : values) best = std::min(best, std::abs(w - std::conj(v)));
    CHECK(best <= 1e-10);
  }
}

TEST_CASE("reduced operator") {
  const auto modes = ModeSet::lattice(P5, 43);
  const ReducedOperator red = assemble_reduced(modes, kNuC, 0.0);
  CHECK(2 * red.dim() == static_cast<Eigen::Index>(modes->size()));
  CHECK(red.matrix.imag().cwiseAbs().maxCoeff() > 0.0);
  for (const std::size_t r : red.representatives) {
    CHECK((*modes)[r].n % 2 == 1);
    CHECK((*modes)[r].m % 2 == 0);
  }

  const LinearOperator full = assemble(modes, kNuC, 0.0);
  const auto full_values = eigenvalues(full);
  const auto reduced = full_spectrum(red);
  for (const auto& sol : reduced) {
    // expansion is an eigenvector of the full operator
    const Eigen::VectorXcd r = full.matrix.cast<cplx>() * sol.vector.values() - sol.lambda * sol.vector.values();
    CHECK(r.cwiseAbs().maxCoeff() / sol.vector.max_norm() <= 1e-10);
    double best = 1e300;
    for (const cplx w : full_values) best = std::min(best, std::abs(w - sol.lambda));
    CHECK(best <= 1e-9);
  }
  // The rightmost reduced eigenvalue is the critical -i omega_c.
  const cplx top = reduced.front().lambda;
  const cplx full_top = full_values.front();
  CHECK(std::abs(top.real()) <= 1e-8);
  CHECK(std::abs(top.imag() + std::abs(full_top.imag())) <= 1e-8);
}

TEST_CASE("reduction on the full grid keeps the odd/even representatives") {
  const auto grid = ModeSet::full_grid(P5, 6);
  const ReducedOperator red = assemble_reduced(grid, 0.2, 0.0);
  CHECK(red.dim() == 9);
  for (const std::size_t r : red.representatives) CHECK((*grid)[r].n % 2 == 1);
}

TEST_CASE("coupling components partition the modes and block the operator") {
  const auto grid = ModeSet::full_grid(P5, 20);
  const auto comps = coupling_components(*grid);
  std::vector<int> owner(grid->size(), -1);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    CHECK(std::is_sorted(comps[c].begin(), comps[c].end()));
    for (const std::size_t i : comps[c]) {
      CHECK(owner[i] == -1);
      owner[i] = static_cast<int>(c);
    }
  }
  CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
  const LinearOperator op = assemble(grid, 0.2, 0.0);
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    for (Eigen::Index j = 0; j < op.dim(); ++j) {
      if (op.matrix(i, j) != 0.0) CHECK(owner[static_cast<std::size_t>(i)] == owner[static_cast<std::size_t>(j)]);
    }
  }
}
