#include "dto/function.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dto {

Signal Signal::constant(double c) {
  return {[c](Seconds) { return c; }, [](Seconds) { return 0.0; }};
}

Signal Signal::sine(double amplitude, double omega) {
  return {[=](Seconds t) { return amplitude * std::sin(omega * t); },
          [=](Seconds t) { return amplitude * omega * std::cos(omega * t); }};
}

Signal Signal::cosine(double amplitude, double omega) {
  return {[=](Seconds t) { return amplitude * std::cos(omega * t); },
          [=](Seconds t) { return -amplitude * omega * std::sin(omega * t); }};
}

Signal operator+(Signal a, Signal b) {
  return {[va = a.value, vb = b.value](Seconds t) { return va(t) + vb(t); },
          [ra = a.rate, rb = b.rate](Seconds t) { return ra(t) + rb(t); }};
}

TrackingQuadratic::TrackingQuadratic(std::vector<Signal> reference, Signal offset)
    : reference_(std::move(reference)), offset_(std::move(offset)) {
  if (reference_.empty()) throw std::invalid_argument("tracking quadratic needs dimension >= 1");
}

Vector TrackingQuadratic::reference_at(Seconds t) const {
  Vector r(reference_.size());
  for (std::size_t k = 0; k < reference_.size(); ++k) r(k) = reference_[k].value(t);
  return r;
}

Vector TrackingQuadratic::reference_rate_at(Seconds t) const {
  Vector r(reference_.size());
  for (std::size_t k = 0; k < reference_.size(); ++k) r(k) = reference_[k].rate(t);
  return r;
}

double TrackingQuadratic::value(const Vector& x, Seconds t) const {
  return (x - reference_at(t)).squaredNorm() + offset_.value(t);
}

Vector TrackingQuadratic::gradient(const Vector& x, Seconds t) const {
  return 2.0 * (x - reference_at(t));
}

Matrix TrackingQuadratic::hessian(const Vector&, Seconds) const {
  const auto n = static_cast<Eigen::Index>(reference_.size());
  return 2.0 * Matrix::Identity(n, n);
}

double TrackingQuadratic::time_partial(const Vector& x, Seconds t) const {
  return -2.0 * (x - reference_at(t)).dot(reference_rate_at(t)) + offset_.rate(t);
}

Vector TrackingQuadratic::grad_time_partial(const Vector&, Seconds t) const {
  return -2.0 * reference_rate_at(t);
}

AffineConstraint::AffineConstraint(Vector normal, Signal bound)
    : normal_(std::move(normal)), bound_(std::move(bound)) {
  if (normal_.size() == 0) throw std::invalid_argument("affine constraint needs dimension >= 1");
}

double AffineConstraint::value(const Vector& x, Seconds t) const {
  return normal_.dot(x) - bound_.value(t);
}

Vector AffineConstraint::gradient(const Vector&, Seconds) const { return normal_; }

Matrix AffineConstraint::hessian(const Vector&, Seconds) const {
  return Matrix::Zero(normal_.size(), normal_.size());
}

double AffineConstraint::time_partial(const Vector&, Seconds t) const { return -bound_.rate(t); }

Vector AffineConstraint::grad_time_partial(const Vector&, Seconds) const {
  return Vector::Zero(normal_.size());
}

LambdaFunction::LambdaFunction(std::size_t dimension, Channels channels)
    : dimension_(dimension), c_(std::move(channels)) {
  if (!c_.value || !c_.gradient || !c_.hessian || !c_.time_partial || !c_.grad_time_partial) {
    throw std::invalid_argument("user-defined function must supply all five evaluation channels");
  }
}

}  // namespace dto
