#include "sqeddy/eig.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "sqeddy/error.hpp"

namespace sqeddy {

namespace {

constexpr int kInverseIterationSteps = 5;
constexpr double kResidualBound = 1e-9;

std::string dims(Eigen::Index n) { return std::to_string(n) + "x" + std::to_string(n); }

template <typename Matrix>
double inf_norm(const Matrix& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Matrix>
double residual_of(const Matrix& m, cplx lambda, const Eigen::VectorXcd& v) {
  const double vn = v.cwiseAbs().maxCoeff();
  if (vn == 0.0) return 0.0;
  Eigen::VectorXcd r = m.template cast<cplx>() * v - lambda * v;
  return r.cwiseAbs().maxCoeff() / vn;
}

/// A few steps of inverse iteration with a slightly offset shift.
template <typename Matrix>
void refine(const Matrix& m, cplx lambda, Eigen::VectorXcd& v, double& residual) {
  const double scale = std::max(1.0, inf_norm(m));
  if (residual <= 1e-13 * scale) return;
  const auto n = m.rows();
  Eigen::MatrixXcd shifted = m.template cast<cplx>();
  const cplx shift = lambda + cplx(1e-10 * scale, 1e-10 * scale);
  shifted.diagonal().array() -= shift;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  for (int step = 0; step < kInverseIterationSteps && residual > 1e-13 * scale; ++step) {
    Eigen::VectorXcd next = lu.solve(v);
    const double nn = next.cwiseAbs().maxCoeff();
    if (!std::isfinite(nn) || nn == 0.0) break;
    next /= nn;
    const double r = residual_of(m, lambda, next);
    if (r >= residual) break;
    v = next;
    residual = r;
  }
  if (residual > kResidualBound * scale) {
    throw NumericalError("eigenvector refinement failed for " + dims(n) + " operator (residual " +
                         std::to_string(residual) + ")");
  }
}

template <typename Matrix>
std::vector<SpectralSolution> solve_pairs(const Matrix& m, const Eigen::MatrixXcd& vectors,
                                          const Eigen::VectorXcd& values, const auto& to_field,
                                          double nu, double mu) {
  std::vector<SpectralSolution> out;
  out.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    Eigen::VectorXcd v = vectors.col(k);
    double res = residual_of(m, values[k], v);
    refine(m, values[k], v, res);
    CoefficientField field = to_field(v);
    normalize_eigenvector(field);
    out.push_back(SpectralSolution{values[k], std::move(field), nu, mu, 0.0});
  }
  std::sort(out.begin(), out.end(),
            [](const SpectralSolution& a, const SpectralSolution& b) { return rightmost_first(a.lambda, b.lambda); });
  return out;
}

std::vector<cplx> sorted(const Eigen::VectorXcd& values) {
  std::vector<cplx> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), rightmost_first);
  return out;
}

}  // namespace

bool rightmost_first(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() > b.real();
  if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) > std::abs(b.imag());
  return a.imag() > b.imag();
}

void normalize_eigenvector(CoefficientField& v) {
  const double vmax = v.max_norm();
  if (vmax == 0.0) return;
  v *= 1.0 / vmax;
  const auto& p = v.mode_set().params();
  const cplx principal = v.at({p.n0, p.m0});
  if (std::abs(principal) > 1e-8) {
    v *= 1.0 / principal;
    v.set({p.n0, p.m0}, 1.0);
    return;
  }
  Eigen::Index imax = 0;
  v.values().cwiseAbs().maxCoeff(&imax);
  v *= 1.0 / v.values()[imax];
  v.values()[imax] = 1.0;
}

std::vector<SpectralSolution> full_spectrum(const LinearOperator& op) {
  if (op.dim() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix, true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("QR iteration did not converge for " + dims(op.dim()) + " operator");
  }
  auto to_field = [&](const Eigen::VectorXcd& v) { return CoefficientField(op.modes, v); };
  auto out = solve_pairs(op.matrix, es.eigenvectors(), es.eigenvalues(), to_field, op.nu, op.mu);
  for (auto& sol : out) sol.residual = residual_of(op.matrix, sol.lambda, sol.vector.values());
  return out;
}

std::vector<SpectralSolution> full_spectrum(const ReducedOperator& op) {
  if (op.dim() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.matrix, true);
  if (es.info() != Eigen::Success) {
    throw NumericalError("QR iteration did not converge for " + dims(op.dim()) + " reduced operator");
  }
  auto to_field = [&](const Eigen::VectorXcd& v) { return op.expand(v); };
  auto out = solve_pairs(op.matrix, es.eigenvectors(), es.eigenvalues(), to_field, op.nu, op.mu);
  // Residual against the full operator in full coordinates.
  const LinearOperator full = assemble(op.modes, op.nu, op.mu);
  for (auto& sol : out) sol.residual = residual_of(full.matrix, sol.lambda, sol.vector.values());
  return out;
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("QR iteration did not converge for " + dims(m.rows()) + " operator");
  }
  return sorted(es.eigenvalues());
}

std::vector<cplx> eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("QR iteration did not converge for " + dims(m.rows()) + " operator");
  }
  return sorted(es.eigenvalues());
}

std::vector<cplx> eigenvalues(const LinearOperator& op) { return eigenvalues(op.matrix); }

std::vector<cplx> eigenvalues_blocked(const LinearOperator& op) {
  const auto components = coupling_components(*op.modes);
  std::vector<std::vector<cplx>> parts(components.size());
  const auto n_blocks = static_cast<std::ptrdiff_t>(components.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < n_blocks; ++b) {
    const auto& idx = components[static_cast<std::size_t>(b)];
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd block(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        block(i, j) = op.matrix(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                                static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
      }
    }
    try {
      parts[static_cast<std::size_t>(b)] = eigenvalues(block);
    } catch (const NumericalError&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw NumericalError("QR iteration did not converge on a block of " + dims(op.dim()));
  std::vector<cplx> all;
  all.reserve(op.modes->size());
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), rightmost_first);
  return all;
}

cplx rightmost_eigenvalue(const LinearOperator& op) {
  const auto values = eigenvalues(op);
  if (values.empty()) throw NumericalError("empty operator has no spectrum");
  return values.front();
}

SpectralSolution rightmost(const LinearOperator& op) {
  auto all = full_spectrum(op);
  if (all.empty()) throw NumericalError("empty operator has no spectrum");
  return std::move(all.front());
}

SpectralSolution rightmost(const ReducedOperator& op) {
  auto all = full_spectrum(op);
  if (all.empty()) throw NumericalError("empty operator has no spectrum");
  return std::move(all.front());
}

SpectralSolution nearest(const LinearOperator& op, cplx target) {
  auto all = full_spectrum(op);
  if (all.empty()) throw NumericalError("empty operator has no spectrum");
  auto best = std::min_element(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.lambda - target) < std::abs(b.lambda - target);
  });
  return std::move(*best);
}

ConvergenceStudy convergence_study(const DomainParams& params, double nu, double mu,
                                   const std::vector<int>& cutoffs, double tolerance) {
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) {
    throw ConfigError("convergence_study: cutoffs must be increasing");
  }
  ConvergenceStudy study;
  for (const int K : cutoffs) {
    const auto modes = ModeSet::lattice(params, K);
    const cplx lambda = rightmost_eigenvalue(assemble(modes, nu, mu));
    ConvergenceRow row{K, modes->size(), lambda, 0.0};
    if (!study.rows.empty()) {
      row.delta = std::abs(lambda - study.rows.back().lambda);
      if (!study.converged_cutoff && row.delta < tolerance) study.converged_cutoff = K;
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace sqeddy
