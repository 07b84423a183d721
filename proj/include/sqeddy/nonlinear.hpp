#pragma once

#include "sqeddy/field.hpp"

namespace sqeddy {

/// Exact Galerkin coefficients of J(phi, chi) = d_y(chi d_x phi) - d_x(chi d_y phi)
/// on the given output modes.
///
/// For phi = sin(a x/N) sin(b y/N), chi = sin(c x/N) sin(d y/N):
///   J = 1/(4 N^2) sum_{s,t = +-1} (a d - s t b c) sin((c + s a) x/N) sin((b + t d) y/N),
/// with negative wavenumbers folded back by oddness.
CoefficientField jacobian_bracket(const CoefficientField& phi, const CoefficientField& chi,
                                  ModeSetPtr out_modes);

/// Same, onto the full grid {1..out_cutoff}^2.
CoefficientField jacobian_bracket(const CoefficientField& phi, const CoefficientField& chi,
                                  int out_cutoff);

/// Euclidean norm of the coefficients of J(phi, chi) in the shell
/// K < max(n, m) <= K_outer, i.e. what a cutoff at K discards.
double dealias_check(const CoefficientField& phi, const CoefficientField& chi, int K, int K_outer);

}  // namespace sqeddy
