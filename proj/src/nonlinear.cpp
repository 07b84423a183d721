#include "sqeddy/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "sqeddy/error.hpp"
#include "sqeddy/kernels.hpp"

namespace sqeddy {

CoefficientField jacobian_bracket(const CoefficientField& phi, const CoefficientField& chi,
                                  ModeSetPtr out_modes) {
  if (phi.mode_set().N() != chi.mode_set().N() || phi.mode_set().N() != out_modes->N()) {
    throw ConfigError("jacobian_bracket: fields use different domain scales");
  }
  CoefficientField out(out_modes);
  kernels::parallel::jacobian_bracket(phi.mode_set(), {phi.values().data(), phi.size()},
                                      chi.mode_set(), {chi.values().data(), chi.size()},
                                      *out_modes, {out.values().data(), out.size()});
  return out;
}

CoefficientField jacobian_bracket(const CoefficientField& phi, const CoefficientField& chi,
                                  int out_cutoff) {
  return jacobian_bracket(phi, chi, ModeSet::full_grid(phi.mode_set().params(), out_cutoff));
}

double dealias_check(const CoefficientField& phi, const CoefficientField& chi, int K, int K_outer) {
  if (K_outer <= K) throw ConfigError("dealias_check needs K_outer > K");
  const auto J = jacobian_bracket(phi, chi, K_outer);
  double sq = 0.0;
  for (std::size_t i = 0; i < J.size(); ++i) {
    const ModeIndex mode = J.mode_set()[i];
    if (std::max(mode.n, mode.m) > K) sq += std::norm(J[i]);
  }
  return std::sqrt(sq);
}

}  // namespace sqeddy
