#include "sqeddy/lattice.hpp"

#include <algorithm>
#include <string>

#include "sqeddy/error.hpp"

namespace sqeddy {

double beta(int n, int m, int N) {
  const double nn = n;
  const double mm = m;
  const double NN = N;
  return (nn * nn + mm * mm) / (NN * NN);
}

DomainParams principal_modes(int N) {
  if (N < 5 || N % 2 == 0) {
    throw ConfigError("domain scale N must be an odd integer >= 5, got " + std::to_string(N));
  }
  return DomainParams{N, (N - 1) / 2, (N + 1) / 2};
}

std::array<ModeIndex, 4> stencil_neighbors(ModeIndex mode, int N) {
  return {ModeIndex{mode.n - N, mode.m - N}, ModeIndex{mode.n + N, mode.m + N},
          ModeIndex{mode.n - N, mode.m + N}, ModeIndex{mode.n + N, mode.m - N}};
}

namespace {

bool principal_residue(int k, const DomainParams& p) {
  const int r = k % p.N;
  return r == p.n0 || r == p.m0;
}

}  // namespace

bool in_influence_lattice(const DomainParams& params, ModeIndex mode) {
  if (mode.n < 1 || mode.m < 1) return false;
  // n0 + jN and m0 + jN enumerate exactly the positive integers with residue
  // n0 or m0, so the four families collapse to a residue test.
  return principal_residue(mode.n, params) && principal_residue(mode.m, params) &&
         (mode.n + mode.m) % 2 == 1;
}

ModeSet::ModeSet(const DomainParams& params, int cutoff, Kind kind, std::vector<ModeIndex> modes)
    : params_(params), cutoff_(cutoff), kind_(kind), modes_(std::move(modes)) {
  std::sort(modes_.begin(), modes_.end());
  betas_.reserve(modes_.size());
  for (const auto& mode : modes_) betas_.push_back(beta(mode, params_.N));
  lookup_.assign(static_cast<std::size_t>(cutoff_ + 1) * static_cast<std::size_t>(cutoff_ + 1), -1);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    lookup_[static_cast<std::size_t>(modes_[i].n) * static_cast<std::size_t>(cutoff_ + 1) +
            static_cast<std::size_t>(modes_[i].m)] = static_cast<int>(i);
  }
}

std::shared_ptr<const ModeSet> ModeSet::lattice(const DomainParams& params, int cutoff) {
  if (params.N < 5 || params.N % 2 == 0 || params.n0 + params.m0 != params.N ||
      params.m0 != params.n0 + 1) {
    throw ConfigError("domain parameters violate N = n0 + m0, m0 = n0 + 1 with odd N >= 5");
  }
  if (cutoff < params.m0) {
    throw ConfigError("cutoff " + std::to_string(cutoff) +
                      " too small to contain the principal modes (needs >= " +
                      std::to_string(params.m0) + ")");
  }
  std::vector<ModeIndex> modes;
  for (int n = 1; n <= cutoff; ++n) {
    for (int m = 1; m <= cutoff; ++m) {
      if (in_influence_lattice(params, {n, m})) modes.push_back({n, m});
    }
  }
  return std::shared_ptr<const ModeSet>(new ModeSet(params, cutoff, Kind::Lattice, std::move(modes)));
}

std::shared_ptr<const ModeSet> ModeSet::full_grid(const DomainParams& params, int cutoff) {
  if (cutoff < 1) throw ConfigError("full-grid cutoff must be positive");
  std::vector<ModeIndex> modes;
  modes.reserve(static_cast<std::size_t>(cutoff) * static_cast<std::size_t>(cutoff));
  for (int n = 1; n <= cutoff; ++n) {
    for (int m = 1; m <= cutoff; ++m) modes.push_back({n, m});
  }
  return std::shared_ptr<const ModeSet>(new ModeSet(params, cutoff, Kind::FullGrid, std::move(modes)));
}

std::optional<std::size_t> ModeSet::find(ModeIndex mode) const {
  if (mode.n < 1 || mode.m < 1 || mode.n > cutoff_ || mode.m > cutoff_) return std::nullopt;
  const int idx = lookup_[static_cast<std::size_t>(mode.n) * static_cast<std::size_t>(cutoff_ + 1) +
                          static_cast<std::size_t>(mode.m)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

}  // namespace sqeddy
