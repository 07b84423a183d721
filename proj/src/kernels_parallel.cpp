#include <cstdlib>

#include "sqeddy/kernels.hpp"
#include "sqeddy/operator.hpp"

namespace sqeddy::kernels::parallel {

void apply_coupling(const ModeSet& modes, std::span<const cplx> in, std::span<cplx> out) {
  const int N = modes.N();
  const auto rows = static_cast<std::ptrdiff_t>(modes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    cplx acc{};
    for (const auto& c : coupling_row(modes[static_cast<std::size_t>(i)], N)) {
      if (c.weight == 0.0) continue;
      if (const auto j = modes.find(c.target)) acc += c.weight * in[*j];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
}

void jacobian_bracket(const ModeSet& phi_modes, std::span<const cplx> phi,
                      const ModeSet& chi_modes, std::span<const cplx> chi,
                      const ModeSet& out_modes, std::span<cplx> out) {
  const int N = out_modes.N();
  const int Kc = chi_modes.cutoff();
  const auto chi_table = chi_modes.lookup_table();
  const double scale = 1.0 / (4.0 * N * N);
  const auto n_out = static_cast<std::ptrdiff_t>(out_modes.size());

  // For an output (p, q) and a phi mode (a, b), the chi index solves
  // c + s a = +-p and b + t d = +-q; every admissible combination is visited
  // once, in a fixed order.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t o = 0; o < n_out; ++o) {
    const int p = out_modes[static_cast<std::size_t>(o)].n;
    const int q = out_modes[static_cast<std::size_t>(o)].m;
    cplx acc{};
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] == cplx{}) continue;
      const int a = phi_modes[i].n;
      const int b = phi_modes[i].m;
      for (int s = 1; s >= -1; s -= 2) {
        for (int su = 1; su >= -1; su -= 2) {
          const int c = su * p - s * a;
          if (c < 1 || c > Kc) continue;
          for (int t = 1; t >= -1; t -= 2) {
            for (int sv = 1; sv >= -1; sv -= 2) {
              const int d = t * (sv * q - b);
              if (d < 1 || d > Kc) continue;
              const int slot = chi_table[static_cast<std::size_t>(c) * static_cast<std::size_t>(Kc + 1) +
                                         static_cast<std::size_t>(d)];
              if (slot < 0) continue;
              const cplx B = chi[static_cast<std::size_t>(slot)];
              if (B == cplx{}) continue;
              const int w = a * d - s * t * b * c;
              if (w == 0) continue;
              acc += static_cast<double>(su * sv * w) * (phi[i] * B);
            }
          }
        }
      }
    }
    out[static_cast<std::size_t>(o)] += acc * scale;
  }
}

void spacetime_jacobian(const ModeSet& modes, int F, std::span<const cplx> phi,
                        std::span<const cplx> chi, std::span<cplx> out) {
  const std::size_t M = modes.size();
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = -F; k <= F; ++k) {
    auto out_k = out.subspan(static_cast<std::size_t>(k + F) * M, M);
    for (int k1 = -F; k1 <= F; ++k1) {
      const int k2 = k - k1;
      if (k2 < -F || k2 > F) continue;
      serial::jacobian_bracket(modes, phi.subspan(static_cast<std::size_t>(k1 + F) * M, M), modes,
                               chi.subspan(static_cast<std::size_t>(k2 + F) * M, M), modes, out_k);
    }
  }
}

}  // namespace sqeddy::kernels::parallel
