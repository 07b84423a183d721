#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqeddy/field.hpp"

namespace sqeddy {

struct Trajectory {
  std::vector<double> times;
  std::vector<CoefficientField> states;
  std::optional<std::string> warning;  // set when dt breaks the step guideline
};

struct IntegrationOptions {
  int sample_every = 1;
  bool coupling = true;  // false drops Delta^{-1} L (diagonal dynamics only)
};

/// Advances da/dt = M(nu, mu) a with an exponential integrating factor for
/// the diagonal -(mu + nu beta) and explicit midpoint for the coupling:
///   a_half = E(h/2) (a + h/2 C a),  a_next = E(h) a + h E(h/2) C a_half.
/// The coupling is applied matrix-free. Throws NumericalError on NaN.
Trajectory integrate_linearized(const CoefficientField& psi0, double nu, double mu, double dt, int steps,
                                const IntegrationOptions& options = {});

/// True when dt (nu beta_max^2 + mu beta_max) <= 0.5.
bool step_guideline_ok(const ModeSet& modes, double nu, double mu, double dt);

struct GrowthEstimate {
  double growth = 0.0;     // Re lambda
  double frequency = 0.0;  // |Im lambda|
  bool frequency_reliable = false;
  double fit_residual = 0.0;  // rms of the log-amplitude fit
  int half_periods = 0;
};

/// Estimates the dominant eigenvalue from the real part of the (n0, m0)
/// coefficient (or the initially largest one if that is absent): frequency
/// from the mean spacing of zero crossings, growth from a least-squares line
/// through the log of the interpolated peaks. Samples before `skip_time` are
/// ignored. Without oscillation the growth comes from log|a| directly.
GrowthEstimate growth_rate(const Trajectory& trajectory, double skip_time = 0.0);

}  // namespace sqeddy
