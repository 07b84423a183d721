#pragma once

#include <complex>

#include <Eigen/Dense>

#include "sqeddy/lattice.hpp"

namespace sqeddy {

using cplx = std::complex<double>;

/// Sine-series coefficients a_{n,m} aligned with a ModeSet.
///
/// Modes outside the set read as exactly zero.
class CoefficientField {
 public:
  CoefficientField() = default;
  explicit CoefficientField(ModeSetPtr modes);
  CoefficientField(ModeSetPtr modes, Eigen::VectorXcd values);

  static CoefficientField unit(ModeSetPtr modes, ModeIndex mode, cplx value = 1.0);

  const ModeSetPtr& modes() const { return modes_; }
  const ModeSet& mode_set() const { return *modes_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }

  cplx operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  cplx& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  /// Coefficient of an arbitrary mode; zero when not retained.
  cplx at(ModeIndex mode) const;
  /// Writes a retained mode; throws std::out_of_range otherwise.
  void set(ModeIndex mode, cplx value);

  double max_norm() const;
  bool is_zero() const;

  /// Re-expresses the field on another mode set with the same domain scale.
  /// Modes absent from the target are dropped.
  CoefficientField embed(ModeSetPtr target) const;

  /// Laplacian: multiplication by -beta.
  CoefficientField laplacian() const;
  CoefficientField conjugate() const;

  CoefficientField& operator+=(const CoefficientField& other);
  CoefficientField& operator-=(const CoefficientField& other);
  CoefficientField& operator*=(cplx s);

 private:
  ModeSetPtr modes_;
  Eigen::VectorXcd values_;
};

CoefficientField operator+(CoefficientField a, const CoefficientField& b);
CoefficientField operator-(CoefficientField a, const CoefficientField& b);
CoefficientField operator*(cplx s, CoefficientField a);

/// L2 pairing (phi, chi) = sum a_{n,m} conj(b_{n,m}); the sine basis is
/// orthonormal under the 4/(N^2 pi^2) normalisation. Throws ConfigError for
/// mismatched mode sets.
cplx inner_product(const CoefficientField& phi, const CoefficientField& chi);

}  // namespace sqeddy
