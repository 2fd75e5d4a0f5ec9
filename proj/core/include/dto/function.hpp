#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "dto/types.hpp"

namespace dto {

/// A smooth function f(x, t) of a state x in R^n and time t.
///
/// Implementations supply every derivative channel analytically. They must be
/// free of hidden mutable state; the simulator evaluates them concurrently.
class TimeVaryingFunction {
 public:
  virtual ~TimeVaryingFunction() = default;

  virtual std::size_t dimension() const = 0;
  virtual double value(const Vector& x, Seconds t) const = 0;
  virtual Vector gradient(const Vector& x, Seconds t) const = 0;
  virtual Matrix hessian(const Vector& x, Seconds t) const = 0;
  /// df/dt with x held fixed.
  virtual double time_partial(const Vector& x, Seconds t) const = 0;
  /// d(grad f)/dt with x held fixed.
  virtual Vector grad_time_partial(const Vector& x, Seconds t) const = 0;
};

using FunctionPtr = std::shared_ptr<const TimeVaryingFunction>;

/// Scalar signal of time with its derivative.
struct Signal {
  std::function<double(Seconds)> value;
  std::function<double(Seconds)> rate;

  static Signal constant(double c);
  /// amplitude * sin(omega * t)
  static Signal sine(double amplitude, double omega = 1.0);
  /// amplitude * cos(omega * t)
  static Signal cosine(double amplitude, double omega = 1.0);

  friend Signal operator+(Signal a, Signal b);
};

/// f(x, t) = ||x - r(t)||^2 + c(t), one reference signal per coordinate.
class TrackingQuadratic final : public TimeVaryingFunction {
 public:
  TrackingQuadratic(std::vector<Signal> reference, Signal offset);

  std::size_t dimension() const override { return reference_.size(); }
  double value(const Vector& x, Seconds t) const override;
  Vector gradient(const Vector& x, Seconds t) const override;
  Matrix hessian(const Vector& x, Seconds t) const override;
  double time_partial(const Vector& x, Seconds t) const override;
  Vector grad_time_partial(const Vector& x, Seconds t) const override;

 private:
  Vector reference_at(Seconds t) const;
  Vector reference_rate_at(Seconds t) const;

  std::vector<Signal> reference_;
  Signal offset_;
};

/// g(x, t) = a^T x - b(t).
class AffineConstraint final : public TimeVaryingFunction {
 public:
  AffineConstraint(Vector normal, Signal bound);

  std::size_t dimension() const override { return static_cast<std::size_t>(normal_.size()); }
  double value(const Vector& x, Seconds t) const override;
  Vector gradient(const Vector& x, Seconds t) const override;
  Matrix hessian(const Vector& x, Seconds t) const override;
  double time_partial(const Vector& x, Seconds t) const override;
  Vector grad_time_partial(const Vector& x, Seconds t) const override;

 private:
  Vector normal_;
  Signal bound_;
};

/// Adapter for user-defined functions given as five callables.
class LambdaFunction final : public TimeVaryingFunction {
 public:
  struct Channels {
    std::function<double(const Vector&, Seconds)> value;
    std::function<Vector(const Vector&, Seconds)> gradient;
    std::function<Matrix(const Vector&, Seconds)> hessian;
    std::function<double(const Vector&, Seconds)> time_partial;
    std::function<Vector(const Vector&, Seconds)> grad_time_partial;
  };

  /// Throws std::invalid_argument if any channel is empty.
  LambdaFunction(std::size_t dimension, Channels channels);

  std::size_t dimension() const override { return dimension_; }
  double value(const Vector& x, Seconds t) const override { return c_.value(x, t); }
  Vector gradient(const Vector& x, Seconds t) const override { return c_.gradient(x, t); }
  Matrix hessian(const Vector& x, Seconds t) const override { return c_.hessian(x, t); }
  double time_partial(const Vector& x, Seconds t) const override { return c_.time_partial(x, t); }
  Vector grad_time_partial(const Vector& x, Seconds t) const override {
    return c_.grad_time_partial(x, t);
  }

 private:
  std::size_t dimension_;
  Channels c_;
};

}  // namespace dto
