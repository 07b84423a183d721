#include <cstdlib>
#include <vector>

#include "sqeddy/kernels.hpp"
#include "sqeddy/operator.hpp"

namespace sqeddy::kernels::serial {

void apply_coupling(const ModeSet& modes, std::span<const cplx> in, std::span<cplx> out) {
  const int N = modes.N();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    cplx acc{};
    for (const auto& c : coupling_row(modes[i], N)) {
      if (c.weight == 0.0) continue;
      if (const auto j = modes.find(c.target)) acc += c.weight * in[*j];
    }
    out[i] = acc;
  }
}

namespace {

std::vector<std::size_t> nonzeros(std::span<const cplx> v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != cplx{}) idx.push_back(i);
  }
  return idx;
}

}  // namespace

void jacobian_bracket(const ModeSet& phi_modes, std::span<const cplx> phi,
                      const ModeSet& chi_modes, std::span<const cplx> chi,
                      const ModeSet& out_modes, std::span<cplx> out) {
  const int N = out_modes.N();
  const int K = out_modes.cutoff();
  const auto table = out_modes.lookup_table();
  const double scale = 1.0 / (4.0 * N * N);
  const auto phi_nz = nonzeros(phi);
  const auto chi_nz = nonzeros(chi);

  for (const std::size_t i : phi_nz) {
    const int a = phi_modes[i].n;
    const int b = phi_modes[i].m;
    const cplx A = phi[i] * scale;
    for (const std::size_t j : chi_nz) {
      const int c = chi_modes[j].n;
      const int d = chi_modes[j].m;
      const cplx AB = A * chi[j];
      for (int s = 1; s >= -1; s -= 2) {
        const int u = c + s * a;
        if (u == 0 || std::abs(u) > K) continue;
        for (int t = 1; t >= -1; t -= 2) {
          const int v = b + t * d;
          if (v == 0 || std::abs(v) > K) continue;
          const int w = a * d - s * t * b * c;
          if (w == 0) continue;
          const int slot = table[static_cast<std::size_t>(std::abs(u)) * static_cast<std::size_t>(K + 1) +
                                 static_cast<std::size_t>(std::abs(v))];
          if (slot < 0) continue;
          const int sign = ((u < 0) != (v < 0)) ? -1 : 1;
          out[static_cast<std::size_t>(slot)] += static_cast<double>(sign * w) * AB;
        }
      }
    }
  }
}

void spacetime_jacobian(const ModeSet& modes, int F, std::span<const cplx> phi,
                        std::span<const cplx> chi, std::span<cplx> out) {
  const std::size_t M = modes.size();
  for (int k = -F; k <= F; ++k) {
    auto out_k = out.subspan(static_cast<std::size_t>(k + F) * M, M);
    for (int k1 = -F; k1 <= F; ++k1) {
      const int k2 = k - k1;
      if (k2 < -F || k2 > F) continue;
      jacobian_bracket(modes, phi.subspan(static_cast<std::size_t>(k1 + F) * M, M), modes,
                       chi.subspan(static_cast<std::size_t>(k2 + F) * M, M), modes, out_k);
    }
  }
}

}  // namespace sqeddy::kernels::serial
