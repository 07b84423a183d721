#include "sqeddy/field.hpp"

#include <algorithm>
#include <stdexcept>

#include "sqeddy/error.hpp"

namespace sqeddy {

CoefficientField::CoefficientField(ModeSetPtr modes)
    : modes_(std::move(modes)), values_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(modes_->size()))) {}

CoefficientField::CoefficientField(ModeSetPtr modes, Eigen::VectorXcd values)
    : modes_(std::move(modes)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != modes_->size()) {
    throw ConfigError("coefficient vector length does not match its mode set");
  }
}

CoefficientField CoefficientField::unit(ModeSetPtr modes, ModeIndex mode, cplx value) {
  CoefficientField f(std::move(modes));
  f.set(mode, value);
  return f;
}

cplx CoefficientField::at(ModeIndex mode) const {
  const auto idx = modes_->find(mode);
  return idx ? values_[static_cast<Eigen::Index>(*idx)] : cplx{};
}

void CoefficientField::set(ModeIndex mode, cplx value) {
  const auto idx = modes_->find(mode);
  if (!idx) throw std::out_of_range("mode not in mode set");
  values_[static_cast<Eigen::Index>(*idx)] = value;
}

double CoefficientField::max_norm() const {
  return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

bool CoefficientField::is_zero() const { return max_norm() == 0.0; }

CoefficientField CoefficientField::embed(ModeSetPtr target) const {
  if (target->N() != modes_->N()) throw ConfigError("cannot embed across domain scales");
  CoefficientField out(target);
  for (std::size_t i = 0; i < size(); ++i) {
    if (const auto j = target->find((*modes_)[i])) out[*j] = (*this)[i];
  }
  return out;
}

CoefficientField CoefficientField::laplacian() const {
  CoefficientField out(*this);
  for (std::size_t i = 0; i < size(); ++i) out[i] *= -modes_->beta_at(i);
  return out;
}

CoefficientField CoefficientField::conjugate() const {
  return CoefficientField(modes_, values_.conjugate());
}

namespace {
void require_same(const CoefficientField& a, const CoefficientField& b) {
  if (a.modes() != b.modes() && (a.mode_set().N() != b.mode_set().N() ||
                                 a.mode_set().modes().size() != b.mode_set().modes().size() ||
                                 !std::equal(a.mode_set().modes().begin(), a.mode_set().modes().end(),
                                             b.mode_set().modes().begin()))) {
    throw ConfigError("coefficient fields live on different mode sets");
  }
}
}  // namespace

CoefficientField& CoefficientField::operator+=(const CoefficientField& other) {
  require_same(*this, other);
  values_ += other.values_;
  return *this;
}

CoefficientField& CoefficientField::operator-=(const CoefficientField& other) {
  require_same(*this, other);
  values_ -= other.values_;
  return *this;
}

CoefficientField& CoefficientField::operator*=(cplx s) {
  values_ *= s;
  return *this;
}

CoefficientField operator+(CoefficientField a, const CoefficientField& b) { return a += b; }
CoefficientField operator-(CoefficientField a, const CoefficientField& b) { return a -= b; }
CoefficientField operator*(cplx s, CoefficientField a) { return a *= s; }

cplx inner_product(const CoefficientField& phi, const CoefficientField& chi) {
  require_same(phi, chi);
  // Eigen's dot conjugates its first argument.
  return chi.values().dot(phi.values());
}

}  // namespace sqeddy
