#pragma once

#include <Eigen/Dense>

#include "sqeddy/field.hpp"

namespace sqeddy {

/// Time-Fourier stack: component k in [-F, F] is the CoefficientField
/// multiplying e^{iks}. Stored column-wise, column k + F.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(ModeSetPtr modes, int F);

  const ModeSetPtr& modes() const { return modes_; }
  const ModeSet& mode_set() const { return *modes_; }
  int F() const { return F_; }

  auto component(int k) { return data_.col(column(k)); }
  auto component(int k) const { return data_.col(column(k)); }
  CoefficientField field(int k) const;
  void set(int k, const CoefficientField& value);

  const Eigen::MatrixXcd& data() const { return data_; }
  Eigen::MatrixXcd& data() { return data_; }

  /// max over k, modes of |c_{-k} - conj(c_k)|.
  double reality_defect() const;
  double max_norm() const;
  /// sqrt(sum_k sum_{n,m} (1 + beta^2) |a|^2).
  double weighted_norm() const;

  /// Value at (x, y, s) of sum_k e^{iks} sum a_{n,m} sin(n x/N) sin(m y/N).
  cplx evaluate(double x, double y, double s) const;

  SpaceTimeField& operator+=(const SpaceTimeField& other);
  SpaceTimeField& operator-=(const SpaceTimeField& other);
  SpaceTimeField& operator*=(cplx s);

 private:
  Eigen::Index column(int k) const;
  void check_compatible(const SpaceTimeField& other) const;

  ModeSetPtr modes_;
  int F_ = 0;
  Eigen::MatrixXcd data_;
};

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator*(cplx s, SpaceTimeField a);

/// Time-averaged pairing <X, e^{iks} Y> = (X_k, Y).
cplx pairing(const SpaceTimeField& X, int k, const CoefficientField& Y);

/// d/ds: component k multiplied by ik.
SpaceTimeField time_derivative(const SpaceTimeField& X);

/// Delta^{-1} J(X, Delta X), convolved exactly in k within |k| <= F and
/// evaluated exactly on the retained modes.
SpaceTimeField advection(const SpaceTimeField& X);

/// Max |Im psi| over an r x r x r sample grid of [0, N pi]^2 x [0, 2 pi).
double pointwise_imaginary_part(const SpaceTimeField& X, int resolution);

}  // namespace sqeddy
