#pragma once

// Five-point central-difference oracles (fourth order) used to validate analytic derivatives. These are
// deliberately independent of every analytic derivative in the library.

#include <algorithm>
#include <cmath>
#include <string>

#include "dto/errors.hpp"
#include "dto/function.hpp"
#include "dto/types.hpp"

namespace dto {

inline constexpr double kDefaultFdStep = 1e-5;

namespace detail {
inline double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(std::string("non-finite value in finite-difference probe of ") + what +
                " (domain violation?)");
  }
  return v;
}

// (-f(+2h) + 8 f(+h) - 8 f(-h) + f(-2h)) / 12h, materialized.
template <typename R>
R five_point(const R& p2, const R& p1, const R& m1, const R& m2, double h) {
  return R((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h));
}
}  // namespace detail

/// Central-difference gradient of a scalar callable phi(x).
template <typename Fn>
Vector central_gradient(Fn&& phi, const Vector& x, double h = kDefaultFdStep) {
  Vector g(x.size());
  Vector probe = x;
  auto at = [&](Eigen::Index k, double offset) {
    probe(k) = x(k) + offset;
    const double v = detail::require_finite(phi(probe), "gradient");
    probe(k) = x(k);
    return v;
  };
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    g(k) = detail::five_point(at(k, 2 * h), at(k, h), at(k, -h), at(k, -2 * h), h);
  }
  return g;
}

/// Central-difference Jacobian of a vector callable psi(x); rows index outputs.
template <typename Fn>
Matrix central_jacobian(Fn&& psi, const Vector& x, double h = kDefaultFdStep) {
  Matrix jac;
  Vector probe = x;
  auto at = [&](Eigen::Index k, double offset) {
    probe(k) = x(k) + offset;
    Vector v = psi(probe);
    probe(k) = x(k);
    return v;
  };
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const Vector col = detail::five_point<Vector>(at(k, 2 * h), at(k, h), at(k, -h), at(k, -2 * h), h);
    if (jac.size() == 0) jac.resize(col.size(), x.size());
    jac.col(k) = col;
  }
  for (Eigen::Index i = 0; i < jac.size(); ++i) detail::require_finite(jac.data()[i], "jacobian");
  return jac;
}

/// Central difference of a callable of time. R is double or Vector; the
/// result is materialized so no Eigen expression outlives its operands.
template <typename R, typename Fn>
R central_time_derivative(Fn&& phi, Seconds t, double h = kDefaultFdStep) {
  return detail::five_point<R>(phi(t + 2 * h), phi(t + h), phi(t - h), phi(t - 2 * h), h);
}

inline Vector fd_gradient(const TimeVaryingFunction& f, const Vector& x, Seconds t,
                          double h = kDefaultFdStep) {
  if (!(h > 0.0)) throw Error("finite-difference step must be positive");
  return central_gradient([&](const Vector& y) { return f.value(y, t); }, x, h);
}

inline Matrix fd_hessian(const TimeVaryingFunction& f, const Vector& x, Seconds t,
                         double h = kDefaultFdStep) {
  return central_jacobian([&](const Vector& y) { return f.gradient(y, t); }, x, h);
}

inline double fd_time_partial(const TimeVaryingFunction& f, const Vector& x, Seconds t,
                              double h = kDefaultFdStep) {
  return detail::require_finite(
      central_time_derivative<double>([&](Seconds s) { return f.value(x, s); }, t, h), "time partial");
}

inline Vector fd_grad_time_partial(const TimeVaryingFunction& f, const Vector& x, Seconds t,
                                   double h = kDefaultFdStep) {
  return central_time_derivative<Vector>([&](Seconds s) { return f.gradient(x, s); }, t, h);
}

/// |a - b| measured against max(rel_tol * |b|, abs_floor).
inline bool close_relative(double a, double b, double rel_tol = 1e-6, double abs_floor = 1e-8) {
  return std::abs(a - b) < std::max(rel_tol * std::abs(b), abs_floor);
}

template <typename A, typename B>
bool close_relative(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                    double rel_tol = 1e-6, double abs_floor = 1e-8) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!close_relative(a(i, j), b(i, j), rel_tol, abs_floor)) return false;
    }
  }
  return true;
}

/// Largest disagreement found by check_derivatives, per channel.
struct DerivativeCheck {
  bool gradient_ok = true;
  bool hessian_ok = true;
  bool time_partial_ok = true;
  bool grad_time_partial_ok = true;

  bool ok() const { return gradient_ok && hessian_ok && time_partial_ok && grad_time_partial_ok; }
};

inline DerivativeCheck check_derivatives(const TimeVaryingFunction& f, const Vector& x, Seconds t,
                                         double h = kDefaultFdStep, double rel_tol = 1e-6) {
  DerivativeCheck r;
  r.gradient_ok = close_relative(f.gradient(x, t), fd_gradient(f, x, t, h), rel_tol);
  const Matrix hess = f.hessian(x, t);
  r.hessian_ok = close_relative(hess, fd_hessian(f, x, t, h), rel_tol) &&
                 close_relative(hess, hess.transpose(), 1e-12, 1e-12);
  r.time_partial_ok = close_relative(f.time_partial(x, t), fd_time_partial(f, x, t, h), rel_tol);
  r.grad_time_partial_ok =
      close_relative(f.grad_time_partial(x, t), fd_grad_time_partial(f, x, t, h), rel_tol);
  return r;
}

}  // namespace dto
