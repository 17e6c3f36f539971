#pragma once

#include <functional>

namespace corrspec {

/// Adaptive quadrature over [a, b]; b may be +infinity and a -infinity.
/// Targets absolute accuracy `tol`; the achieved error estimate is written to
/// *err_estimate when non-null.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, double* err_estimate = nullptr);

/// Integral over (0, inf) after the variable change u = t/(1+t), which maps
/// the half line onto (0,1) and tames slowly decaying tails.
double integrate_halfline_mapped(const std::function<double(double)>& f,
                                 double tol = 1e-12, double* err_estimate = nullptr);

} // namespace corrspec
