#pragma once

// Hot loops of the solver, in two flavours. `serial` is the reference
// implementation kept for testing; `parallel` is the OpenMP version used in
// production paths. Both produce results that are independent of the thread
// count: parallel loops only ever own disjoint outputs and accumulate each
// output in a fixed order.

#include <complex>
#include <span>

#include "sqeddy/lattice.hpp"

namespace sqeddy::kernels {

using cplx = std::complex<double>;

namespace serial {

/// out = C in, where C is the coupling part of the assembled operator
/// (Delta^{-1} L). `out` is overwritten.
void apply_coupling(const ModeSet& modes, std::span<const cplx> in, std::span<cplx> out);

/// out += Galerkin coefficients of J(phi, chi) on `out_modes`, by the
/// product-to-sum expansion. Zero input coefficients are skipped.
void jacobian_bracket(const ModeSet& phi_modes, std::span<const cplx> phi,
                      const ModeSet& chi_modes, std::span<const cplx> chi,
                      const ModeSet& out_modes, std::span<cplx> out);

/// Time-Fourier convolution of the Jacobian: for stacks indexed k + F with
/// k in [-F, F], out[k] += sum_{k1 + k2 = k} J(phi[k1], chi[k2]).
/// All stacks share one mode set.
void spacetime_jacobian(const ModeSet& modes, int F, std::span<const cplx> phi,
                        std::span<const cplx> chi, std::span<cplx> out);

}  // namespace serial

namespace parallel {

void apply_coupling(const ModeSet& modes, std::span<const cplx> in, std::span<cplx> out);

/// Gather formulation: each output mode collects its contributing pairs.
void jacobian_bracket(const ModeSet& phi_modes, std::span<const cplx> phi,
                      const ModeSet& chi_modes, std::span<const cplx> chi,
                      const ModeSet& out_modes, std::span<cplx> out);

/// Parallel over output frequencies.
void spacetime_jacobian(const ModeSet& modes, int F, std::span<const cplx> phi,
                        std::span<const cplx> chi, std::span<cplx> out);

}  // namespace parallel

}  // namespace sqeddy::kernels
