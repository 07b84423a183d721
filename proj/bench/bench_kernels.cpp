// Serial vs OpenMP kernels on the Hopf-solver sizes. Prints wall time per
// call and the max deviation between the two results.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "sqeddy/kernels.hpp"
#include "sqeddy/lattice.hpp"

using namespace sqeddy;
using kernels::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

template <typename F>
double seconds_per_call(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

void report(const char* name, double ts, double tp, double diff) {
  std::printf("%-22s serial %10.3f ms  parallel %10.3f ms  speedup %5.2f  max|diff| %.2e\n", name, 1e3 * ts,
              1e3 * tp, ts / tp, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const int K = argc > 1 ? std::atoi(argv[1]) : 23;
  const int F = argc > 2 ? std::atoi(argv[2]) : 4;
  const DomainParams params = principal_modes(5);
  const auto grid = ModeSet::full_grid(params, K);
  const std::size_t M = grid->size();
  std::mt19937_64 rng(7);
  std::printf("threads %d, full grid K = %d (%zu modes), F = %d\n", omp_get_max_threads(), K, M, F);

  {
    const auto in = random_vector(M, rng);
    std::vector<cplx> a(M), b(M);
    const double ts = seconds_per_call([&] { kernels::serial::apply_coupling(*grid, in, a); }, 200);
    const double tp = seconds_per_call([&] { kernels::parallel::apply_coupling(*grid, in, b); }, 200);
    report("apply_coupling", ts, tp, max_diff(a, b));
  }
  {
    const auto phi = random_vector(M, rng);
    const auto chi = random_vector(M, rng);
    std::vector<cplx> a(M), b(M);
    const double ts = seconds_per_call(
        [&] {
          std::fill(a.begin(), a.end(), cplx{});
          kernels::serial::jacobian_bracket(*grid, phi, *grid, chi, *grid, a);
        },
        5);
    const double tp = seconds_per_call(
        [&] {
          std::fill(b.begin(), b.end(), cplx{});
          kernels::parallel::jacobian_bracket(*grid, phi, *grid, chi, *grid, b);
        },
        5);
    report("jacobian_bracket", ts, tp, max_diff(a, b));
  }
  {
    const std::size_t n = M * static_cast<std::size_t>(2 * F + 1);
    const auto phi = random_vector(n, rng);
    const auto chi = random_vector(n, rng);
    std::vector<cplx> a(n), b(n);
    const double ts = seconds_per_call(
        [&] {
          std::fill(a.begin(), a.end(), cplx{});
          kernels::serial::spacetime_jacobian(*grid, F, phi, chi, a);
        },
        1);
    const double tp = seconds_per_call(
        [&] {
          std::fill(b.begin(), b.end(), cplx{});
          kernels::parallel::spacetime_jacobian(*grid, F, phi, chi, b);
        },
        1);
    report("spacetime_jacobian", ts, tp, max_diff(a, b));
  }
  return 0;
}
