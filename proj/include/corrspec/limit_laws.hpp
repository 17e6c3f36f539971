#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "corrspec/measure.hpp"

namespace corrspec {

/// Marchenko-Pastur law with ratio parameter gamma: continuous density on
/// [a, b] = [(1-sqrt(gamma))^2, (1+sqrt(gamma))^2], plus a point mass
/// max(0, 1 - 1/gamma) at zero when gamma > 1.
struct MpLaw {
    explicit MpLaw(double gamma);
    double gamma;
    double a;
    double b;
    double zero_mass;
};

double mp_density(double gamma, double x);
double mp_cdf(double gamma, double x);
double mp_quantile(double gamma, double q);

/// Root of gamma z S^2 + (z + gamma - 1) S + 1 = 0 with positive imaginary
/// part; requires Im z > 0.
std::complex<double> mp_stieltjes(double gamma, std::complex<double> z);

struct LsdOptions {
    double damping = 0.5;
    double tol = 1e-10;
    int max_iter = 10000;
};

struct FixedPointResult {
    std::complex<double> s;
    int iterations = 0;
    double residual = 0.0;
};

struct LsdConvergenceError : std::runtime_error {
    LsdConvergenceError(const std::string& msg, double last_residual_in)
        : std::runtime_error(msg), last_residual(last_residual_in) {}
    double last_residual;
};

struct LsdInstabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solves s = integral dH(lambda) / (lambda (1 - gamma - gamma z s) - z) by
/// damped fixed-point iteration started at s0 (default -1/z). Throws
/// LsdConvergenceError when max_iter is hit and LsdInstabilityError when the
/// iterate leaves the upper half-plane (retry with smaller damping).
FixedPointResult solve_lsd(double gamma, const DiscreteMeasure& H,
                           std::complex<double> z, const LsdOptions& options = {},
                           std::complex<double> s0 = {0.0, 0.0});

/// Stieltjes-inverted density of the generalized law along a real grid.
struct LsdSolution {
    double gamma = 0.0;
    DiscreteMeasure H;
    std::vector<double> grid;
    double epsilon = 0.0;
    std::vector<std::complex<double>> s_values;
    std::vector<double> density;        // Im s(x + i eps) / pi, O(eps) bias
    double zero_mass = 0.0;
    bool zero_mass_flagged = false;     // H carries an atom at 0
    std::vector<int> iterations;        // per grid point
    std::vector<double> residuals;      // per grid point
};

/// Evaluates solve_lsd at x + i*epsilon for each grid point, warm-starting
/// from the previous solution. Solver errors are annotated with the grid index.
LsdSolution lsd_density_on_grid(double gamma, const DiscreteMeasure& H,
                                const std::vector<double>& x_grid, double epsilon,
                                const LsdOptions& options = {});

/// CDF of the solution at x: zero mass plus the trapezoid integral of the
/// density, rescaled so the total mass is exactly 1.
double lsd_cdf(const LsdSolution& solution, double x);

/// Generalized inverse of lsd_cdf at each q (0 inside the point mass).
std::vector<double> lsd_quantiles(const LsdSolution& solution,
                                  const std::vector<double>& q_list);

} // namespace corrspec
