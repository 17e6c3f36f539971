#include "corrspec/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace corrspec {

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, double* err_estimate) {
    double err = 0.0;
    double value;
    if (std::isfinite(a) && std::isfinite(b)) {
        // tanh_sinh absorbs endpoint singularities (square-root edges etc.).
        static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
        value = ts.integrate(f, a, b, tol, &err);
        // tanh_sinh reports a relative error estimate.
        err *= std::abs(value);
    } else {
        value = GK::integrate(f, a, b, 15, tol, &err);
    }
    if (err_estimate) *err_estimate = err;
    return value;
}

double integrate_halfline_mapped(const std::function<double(double)>& f,
                                 double tol, double* err_estimate) {
    auto mapped = [&f](double u) {
        const double one_minus = 1.0 - u;
        const double t = u / one_minus;
        return f(t) / (one_minus * one_minus);
    };
    double err = 0.0;
    const double value = GK::integrate(mapped, 0.0, 1.0, 15, tol, &err);
    if (err_estimate) *err_estimate = err;
    return value;
}

} // namespace corrspec
