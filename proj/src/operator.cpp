#include "sqeddy/operator.hpp"

#include <cstdlib>
#include <numeric>

#include "sqeddy/error.hpp"
#include "sqeddy/kernels.hpp"

namespace sqeddy {

std::array<Coupling, 4> coupling_row(ModeIndex row, int N) {
  const double b = beta(row, N);
  const double diff = static_cast<double>(row.n - row.m) / (4.0 * N * b);
  const double sum = static_cast<double>(row.n + row.m) / (4.0 * N * b);
  // lambda a = ... - diff [(b_{-,-} - 2) a_{-,-} - (b_{+,+} - 2) a_{+,+}]
  //                - sum  [(b_{-,+} - 2) a_{-,+} - (b_{+,-} - 2) a_{+,-}]
  const std::array<double, 4> factor{-diff, diff, -sum, sum};
  const auto shifted = stencil_neighbors(row, N);

  std::array<Coupling, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) {
    const ModeIndex s = shifted[k];
    if (s.n == 0 || s.m == 0) {
      out[k] = Coupling{ModeIndex{std::abs(s.n), std::abs(s.m)}, 0.0};
      continue;
    }
    const double sign = ((s.n < 0) != (s.m < 0)) ? -1.0 : 1.0;
    out[k] = Coupling{ModeIndex{std::abs(s.n), std::abs(s.m)}, sign * factor[k] * (beta(s, N) - 2.0)};
  }
  return out;
}

LinearOperator assemble(ModeSetPtr modes, double nu, double mu) {
  if (nu < 0.0 || mu < 0.0) throw ConfigError("viscosity and friction must be non-negative");
  const auto dim = static_cast<Eigen::Index>(modes->size());
  LinearOperator op{modes, Eigen::MatrixXd::Zero(dim, dim), nu, mu};
  const int N = modes->N();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto row = static_cast<std::size_t>(i);
    op.matrix(i, i) = -(mu + nu * modes->beta_at(row));
    for (const auto& c : coupling_row((*modes)[row], N)) {
      if (c.weight == 0.0) continue;
      if (const auto j = modes->find(c.target)) op.matrix(i, static_cast<Eigen::Index>(*j)) += c.weight;
    }
  }
  return op;
}

CoefficientField apply_L(const CoefficientField& psi) {
  CoefficientField out(psi.modes());
  const auto& modes = psi.mode_set();
  kernels::parallel::apply_coupling(modes, {psi.values().data(), psi.size()},
                                    {out.values().data(), out.size()});
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -modes.beta_at(i);
  return out;
}

CoefficientField apply_L_adjoint(const CoefficientField& psi) {
  // L = -diag(beta) C, so L^T x = -C^T (beta x): scatter along the stencil.
  const auto& modes = psi.mode_set();
  CoefficientField out(psi.modes());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const cplx scaled = -modes.beta_at(i) * psi[i];
    if (scaled == cplx{}) continue;
    for (const auto& c : coupling_row(modes[i], modes.N())) {
      if (c.weight == 0.0) continue;
      if (const auto j = modes.find(c.target)) out[*j] += c.weight * scaled;
    }
  }
  return out;
}

CoefficientField ReducedOperator::expand(const Eigen::VectorXcd& reduced) const {
  CoefficientField out(modes);
  const cplx minus_i{0.0, -1.0};
  for (std::size_t r = 0; r < representatives.size(); ++r) {
    const std::size_t pos = representatives[r];
    const ModeIndex mode = (*modes)[pos];
    const cplx v = reduced[static_cast<Eigen::Index>(r)];
    out[pos] = v;
    out.set(ModeIndex{mode.m, mode.n}, minus_i * v);
  }
  return out;
}

ReducedOperator assemble_reduced(ModeSetPtr modes, double nu, double mu) {
  const LinearOperator full = assemble(modes, nu, mu);
  ReducedOperator red;
  red.modes = modes;
  red.nu = nu;
  red.mu = mu;

  std::vector<int> rep_slot(modes->size(), -1);
  for (std::size_t i = 0; i < modes->size(); ++i) {
    const ModeIndex mode = (*modes)[i];
    if (mode.n % 2 == 1 && mode.m % 2 == 0) {
      if (!modes->contains({mode.m, mode.n})) {
        throw ConfigError("mode set is not closed under index swap; cannot reduce");
      }
      rep_slot[i] = static_cast<int>(red.representatives.size());
      red.representatives.push_back(i);
    }
  }
  const auto dim = static_cast<Eigen::Index>(red.representatives.size());
  red.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx minus_i{0.0, -1.0};
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto row = static_cast<Eigen::Index>(red.representatives[static_cast<std::size_t>(r)]);
    for (Eigen::Index j = 0; j < full.dim(); ++j) {
      const double w = full.matrix(row, j);
      if (w == 0.0) continue;
      const auto col = static_cast<std::size_t>(j);
      if (rep_slot[col] >= 0) {
        red.matrix(r, rep_slot[col]) += w;
      } else {
        // a_{p,q} = -i a_{q,p} for p even, q odd; only opposite parity occurs.
        const ModeIndex mode = (*modes)[col];
        const auto partner = modes->find({mode.m, mode.n});
        if (!partner || rep_slot[*partner] < 0) {
          throw ConfigError("reduced operator requires opposite-parity lattice modes");
        }
        red.matrix(r, rep_slot[*partner]) += minus_i * w;
      }
    }
  }
  return red;
}

std::vector<std::vector<std::size_t>> coupling_components(const ModeSet& modes) {
  std::vector<std::size_t> parent(modes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (const auto& c : coupling_row(modes[i], modes.N())) {
      if (c.weight == 0.0) continue;
      if (const auto j = modes.find(c.target)) {
        const auto ri = root(i);
        const auto rj = root(*j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<int> slot(modes.size(), -1);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto r = root(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return components;
}

}  // namespace sqeddy
