#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sqeddy {

/// Wavenumber pair of the sine mode sin(n x / N) sin(m y / N).
struct ModeIndex {
  int n = 1;
  int m = 1;

  auto operator<=>(const ModeIndex&) const = default;
};

/// Domain scale N and the principal mode pair (n0, m0) with N = n0 + m0,
/// m0 = n0 + 1.
struct DomainParams {
  int N = 5;
  int n0 = 2;
  int m0 = 3;

  bool operator==(const DomainParams&) const = default;
};

/// Laplacian symbol (n^2 + m^2) / N^2. Accepts any integer pair.
double beta(int n, int m, int N);
inline double beta(ModeIndex mode, int N) { return beta(mode.n, mode.m, N); }

/// Principal modes for odd N >= 5. Throws ConfigError otherwise.
DomainParams principal_modes(int N);

/// The four coupling shifts of the square eddy stencil: (n-N, m-N),
/// (n+N, m+N), (n-N, m+N), (n+N, m-N), in that order.
std::array<ModeIndex, 4> stencil_neighbors(ModeIndex mode, int N);

/// Ordered, truncated set of sine modes forming a Galerkin basis.
///
/// Modes are stored lexicographically in (n, m). Two flavours exist: the
/// influence lattice of the principal modes (opposite-parity indices whose
/// residues mod N are n0 or m0), and the full square grid {1..K}^2 used for
/// simplicity checks and the nonlinear branch solver.
class ModeSet {
 public:
  enum class Kind { Lattice, FullGrid };

  /// Influence lattice truncated at max(n, m) <= cutoff.
  static std::shared_ptr<const ModeSet> lattice(const DomainParams& params, int cutoff);
  /// Every mode with 1 <= n, m <= cutoff.
  static std::shared_ptr<const ModeSet> full_grid(const DomainParams& params, int cutoff);

  const DomainParams& params() const { return params_; }
  int N() const { return params_.N; }
  int cutoff() const { return cutoff_; }
  Kind kind() const { return kind_; }

  std::size_t size() const { return modes_.size(); }
  const ModeIndex& operator[](std::size_t i) const { return modes_[i]; }
  std::span<const ModeIndex> modes() const { return modes_; }
  double beta_at(std::size_t i) const { return betas_[i]; }
  std::span<const double> betas() const { return betas_; }

  /// Dense position of a mode, or nullopt when it is not retained.
  std::optional<std::size_t> find(ModeIndex mode) const;
  bool contains(ModeIndex mode) const { return find(mode).has_value(); }

  /// Flat lookup table indexed by n * (cutoff + 1) + m; -1 marks absent modes.
  std::span<const int> lookup_table() const { return lookup_; }

 private:
  ModeSet(const DomainParams& params, int cutoff, Kind kind, std::vector<ModeIndex> modes);

  DomainParams params_;
  int cutoff_;
  Kind kind_;
  std::vector<ModeIndex> modes_;
  std::vector<double> betas_;
  std::vector<int> lookup_;
};

using ModeSetPtr = std::shared_ptr<const ModeSet>;

/// True when (n, m) belongs to the (untruncated) influence lattice of params.
bool in_influence_lattice(const DomainParams& params, ModeIndex mode);

}  // namespace sqeddy
