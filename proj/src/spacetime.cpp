#include "sqeddy/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqeddy/error.hpp"
#include "sqeddy/kernels.hpp"

namespace sqeddy {

SpaceTimeField::SpaceTimeField(ModeSetPtr modes, int F) : modes_(std::move(modes)), F_(F) {
  if (F < 1) throw ConfigError("time truncation F must be >= 1");
  data_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(modes_->size()), 2 * F + 1);
}

Eigen::Index SpaceTimeField::column(int k) const {
  if (k < -F_ || k > F_) throw std::out_of_range("time frequency outside [-F, F]");
  return k + F_;
}

CoefficientField SpaceTimeField::field(int k) const { return CoefficientField(modes_, data_.col(column(k))); }

void SpaceTimeField::set(int k, const CoefficientField& value) {
  data_.col(column(k)) = value.embed(modes_).values();
}

double SpaceTimeField::reality_defect() const {
  double worst = 0.0;
  for (int k = 0; k <= F_; ++k) {
    worst = std::max(worst, (data_.col(column(-k)) - data_.col(column(k)).conjugate()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double SpaceTimeField::max_norm() const { return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff(); }

double SpaceTimeField::weighted_norm() const {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    const double b = modes_->beta_at(static_cast<std::size_t>(i));
    sq += (1.0 + b * b) * data_.row(i).squaredNorm();
  }
  return std::sqrt(sq);
}

cplx SpaceTimeField::evaluate(double x, double y, double s) const {
  const int N = modes_->N();
  cplx total = 0.0;
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    const ModeIndex mode = (*modes_)[static_cast<std::size_t>(i)];
    const double shape = std::sin(mode.n * x / N) * std::sin(mode.m * y / N);
    cplx acc = 0.0;
    for (int k = -F_; k <= F_; ++k) acc += data_(i, column(k)) * std::polar(1.0, k * s);
    total += shape * acc;
  }
  return total;
}

void SpaceTimeField::check_compatible(const SpaceTimeField& other) const {
  const auto a = modes_->modes();
  const auto b = other.modes_->modes();
  const bool same = modes_ == other.modes_ || std::equal(a.begin(), a.end(), b.begin(), b.end());
  if (F_ != other.F_ || !same) {
    throw ConfigError("space-time fields on different truncations");
  }
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
  check_compatible(other);
  data_ += other.data_;
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& other) {
  check_compatible(other);
  data_ -= other.data_;
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx s) {
  data_ *= s;
  return *this;
}

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
SpaceTimeField operator*(cplx s, SpaceTimeField a) { return a *= s; }

cplx pairing(const SpaceTimeField& X, int k, const CoefficientField& Y) {
  return inner_product(X.field(k), Y.embed(X.modes()));
}

SpaceTimeField time_derivative(const SpaceTimeField& X) {
  SpaceTimeField out(X.modes(), X.F());
  for (int k = -X.F(); k <= X.F(); ++k) out.component(k) = cplx(0.0, k) * X.component(k);
  return out;
}

SpaceTimeField advection(const SpaceTimeField& X) {
  const auto& modes = X.mode_set();
  const auto M = static_cast<Eigen::Index>(modes.size());
  Eigen::Map<const Eigen::VectorXd> b(modes.betas().data(), M);
  Eigen::MatrixXcd chi = -(b.cast<cplx>().asDiagonal() * X.data());
  SpaceTimeField out(X.modes(), X.F());
  const auto n = static_cast<std::size_t>(X.data().size());
  kernels::parallel::spacetime_jacobian(modes, X.F(), {X.data().data(), n}, {chi.data(), n},
                                        {out.data().data(), n});
  out.data() = (-b.cwiseInverse()).cast<cplx>().asDiagonal() * out.data();
  return out;
}

double pointwise_imaginary_part(const SpaceTimeField& X, int resolution) {
  if (resolution < 2) throw ConfigError("sample resolution must be >= 2");
  const double L = X.mode_set().N() * std::numbers::pi;
  double worst = 0.0;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      for (int l = 0; l < resolution; ++l) {
        const double x = L * i / (resolution - 1);
        const double y = L * j / (resolution - 1);
        const double s = 2.0 * std::numbers::pi * l / resolution;
        worst = std::max(worst, std::abs(X.evaluate(x, y, s).imag()));
      }
    }
  }
  return worst;
}

}  // namespace sqeddy
