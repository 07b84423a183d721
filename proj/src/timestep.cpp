#include "sqeddy/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sqeddy/error.hpp"
#include "sqeddy/kernels.hpp"

namespace sqeddy {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  Line line;
  if (det == 0.0) return line;
  line.slope = (n * sxy - sx * sy) / det;
  line.intercept = (sy - line.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (line.intercept + line.slope * x[i]);
    ss += r * r;
  }
  line.rms = std::sqrt(ss / n);
  return line;
}

}  // namespace

bool step_guideline_ok(const ModeSet& modes, double nu, double mu, double dt) {
  double bmax = 0.0;
  for (const double b : modes.betas()) bmax = std::max(bmax, b);
  return dt * (nu * bmax * bmax + mu * bmax) <= 0.5;
}

Trajectory integrate_linearized(const CoefficientField& psi0, double nu, double mu, double dt, int steps,
                                const IntegrationOptions& options) {
  if (!(dt > 0.0) || steps < 0 || options.sample_every < 1) {
    throw ConfigError("integrate_linearized needs dt > 0, steps >= 0, sample_every >= 1");
  }
  const ModeSet& modes = psi0.mode_set();
  const auto M = static_cast<Eigen::Index>(modes.size());
  Eigen::ArrayXd D(M);
  for (Eigen::Index i = 0; i < M; ++i) D[i] = -(mu + nu * modes.beta_at(static_cast<std::size_t>(i)));
  const Eigen::ArrayXcd E_full = (D * dt).exp().cast<cplx>();
  const Eigen::ArrayXcd E_half = (D * (0.5 * dt)).exp().cast<cplx>();

  Trajectory traj;
  if (!step_guideline_ok(modes, nu, mu, dt)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "dt = %.3g exceeds the step guideline dt (nu beta_max^2 + mu beta_max) <= 0.5", dt);
    traj.warning = buf;
  }

  Eigen::VectorXcd a = psi0.values();
  Eigen::VectorXcd Ca(M), half(M), Chalf(M);
  const auto n = static_cast<std::size_t>(M);
  auto couple = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    if (options.coupling) {
      kernels::parallel::apply_coupling(modes, {in.data(), n}, {out.data(), n});
    } else {
      out.setZero();
    }
  };

  traj.times.push_back(0.0);
  traj.states.emplace_back(psi0.modes(), a);
  for (int step = 1; step <= steps; ++step) {
    couple(a, Ca);
    half = (E_half * (a + (0.5 * dt) * Ca).array()).matrix();
    couple(half, Chalf);
    a = (E_full * a.array() + dt * E_half * Chalf.array()).matrix();
    if (!a.allFinite()) {
      throw NumericalError("linearised integration produced non-finite values at step " + std::to_string(step));
    }
    if (step % options.sample_every == 0) {
      traj.times.push_back(step * dt);
      traj.states.emplace_back(psi0.modes(), a);
    }
  }
  return traj;
}

GrowthEstimate growth_rate(const Trajectory& trajectory, double skip_time) {
  GrowthEstimate est;
  if (trajectory.states.empty()) return est;
  const CoefficientField& first = trajectory.states.front();
  const auto& p = first.mode_set().params();
  std::size_t probe = 0;
  if (const auto idx = first.mode_set().find({p.n0, p.m0}); idx && std::abs(first[*idx]) > 0.0) {
    probe = *idx;
  } else {
    Eigen::Index imax = 0;
    first.values().cwiseAbs().maxCoeff(&imax);
    probe = static_cast<std::size_t>(imax);
  }

  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> amp;
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    if (trajectory.times[i] < skip_time) continue;
    t.push_back(trajectory.times[i]);
    x.push_back(trajectory.states[i][probe].real());
    amp.push_back(std::abs(trajectory.states[i][probe]));
  }
  if (t.size() < 3) return est;
  const double initial = std::abs(first[probe]);
  if (initial == 0.0) return est;

  std::vector<double> crossings;
  std::vector<std::size_t> crossing_index;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if ((x[i - 1] < 0.0) != (x[i] < 0.0) && x[i] != x[i - 1]) {
      crossings.push_back(t[i - 1] - x[i - 1] * (t[i] - t[i - 1]) / (x[i] - x[i - 1]));
      crossing_index.push_back(i);
    }
  }

  if (crossings.size() < 3) {
    // No usable oscillation: growth from the modulus itself.
    std::vector<double> tt;
    std::vector<double> la;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (amp[i] > 0.0) {
        tt.push_back(t[i]);
        la.push_back(std::log(amp[i]));
      }
    }
    if (tt.size() >= 2) {
      const Line line = least_squares(tt, la);
      est.growth = line.slope;
      est.fit_residual = line.rms;
    }
    return est;
  }

  const double span = crossings.back() - crossings.front();
  est.half_periods = static_cast<int>(crossings.size()) - 1;
  est.frequency = std::numbers::pi * est.half_periods / span;

  std::vector<double> peak_t;
  std::vector<double> peak_log;
  for (std::size_t c = 1; c < crossing_index.size(); ++c) {
    const std::size_t lo = crossing_index[c - 1];
    const std::size_t hi = crossing_index[c];
    std::size_t imax = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    }
    if (imax == 0 || imax + 1 >= x.size()) continue;
    const double y0 = std::abs(x[imax - 1]);
    const double y1 = std::abs(x[imax]);
    const double y2 = std::abs(x[imax + 1]);
    const double h = t[imax + 1] - t[imax];
    const double denom = y0 - 2.0 * y1 + y2;
    const double shift = denom == 0.0 ? 0.0 : 0.5 * (y0 - y2) / denom;
    const double value = y1 - 0.25 * (y0 - y2) * shift;
    if (value <= 0.0) continue;
    peak_t.push_back(t[imax] + shift * h);
    peak_log.push_back(std::log(value));
  }
  if (peak_t.size() >= 2) {
    const Line line = least_squares(peak_t, peak_log);
    est.growth = line.slope;
    est.fit_residual = line.rms;
  }
  const auto tail = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(amp.size()), 8);
  const double final_amp = *std::max_element(amp.end() - tail, amp.end());
  est.frequency_reliable = final_amp >= 1e-12 * initial;
  return est;
}

}  // namespace sqeddy
