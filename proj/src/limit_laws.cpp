#include "corrspec/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "corrspec/quadrature.hpp"

namespace corrspec {

namespace {
constexpr double kPi = std::numbers::pi;

void require_gamma(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

void require_upper_half_plane(std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw std::domain_error("Im z must be positive");
}

// Cumulative mass of the solution's continuous part up to grid[i], by
// trapezoid; index 0 carries no mass.
std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                         const std::vector<double>& f) {
    std::vector<double> cum(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        cum[i] = cum[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    }
    return cum;
}
} // namespace

MpLaw::MpLaw(double gamma_in) : gamma(gamma_in) {
    require_gamma(gamma);
    const double root = std::sqrt(gamma);
    a = (1.0 - root) * (1.0 - root);
    b = (1.0 + root) * (1.0 + root);
    zero_mass = std::max(0.0, 1.0 - 1.0 / gamma);
}

double mp_density(double gamma, double x) {
    const MpLaw law(gamma);
    if (x <= law.a || x >= law.b) return 0.0; // includes the x = 0, gamma = 1 convention
    return std::sqrt((law.b - x) * (x - law.a)) / (2.0 * kPi * gamma * x);
}

double mp_cdf(double gamma, double x) {
    const MpLaw law(gamma);
    double mass = x >= 0.0 ? law.zero_mass : 0.0;
    if (x <= law.a) return mass;
    const double upper = std::min(x, law.b);
    mass += integrate([gamma](double t) { return mp_density(gamma, t); }, law.a, upper,
                      1e-11);
    return std::min(mass, 1.0);
}

double mp_quantile(double gamma, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("mp_quantile: q outside (0,1)");
    const MpLaw law(gamma);
    if (q <= law.zero_mass) return 0.0;
    double lo = law.a, hi = law.b;
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (mp_cdf(gamma, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::complex<double> mp_stieltjes(double gamma, std::complex<double> z) {
    require_gamma(gamma);
    require_upper_half_plane(z);
    const std::complex<double> qa = gamma * z;
    const std::complex<double> qb = z + gamma - 1.0;
    const std::complex<double> disc = std::sqrt(qb * qb - 4.0 * qa);
    const std::complex<double> r1 = (-qb + disc) / (2.0 * qa);
    const std::complex<double> r2 = (-qb - disc) / (2.0 * qa);
    if (r1.imag() > 0.0 && r2.imag() > 0.0) {
        throw std::runtime_error("mp_stieltjes: both roots in C+, branch ambiguity");
    }
    if (r1.imag() > 0.0) return r1;
    if (r2.imag() > 0.0) return r2;
    throw std::runtime_error("mp_stieltjes: no root with positive imaginary part");
}

FixedPointResult solve_lsd(double gamma, const DiscreteMeasure& H,
                           std::complex<double> z, const LsdOptions& options,
                           std::complex<double> s0) {
    require_gamma(gamma);
    require_upper_half_plane(z);
    if (H.atoms.size() != H.weights.size() || H.atoms.empty()) {
        throw std::invalid_argument("solve_lsd: malformed measure H");
    }
    if (std::abs(H.total_mass() - 1.0) > 1e-12) {
        throw std::invalid_argument("solve_lsd: H must be a probability measure");
    }

    auto step = [&](std::complex<double> s) {
        const std::complex<double> shift = 1.0 - gamma - gamma * z * s;
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < H.atoms.size(); ++k) {
            acc += H.weights[k] / (H.atoms[k] * shift - z);
        }
        return acc;
    };

    std::complex<double> s = (s0 == std::complex<double>{0.0, 0.0}) ? -1.0 / z : s0;
    double residual = 0.0;
    for (int it = 1; it <= options.max_iter; ++it) {
        const std::complex<double> g = step(s);
        residual = std::abs(s - g);
        if (residual <= options.tol) {
            return FixedPointResult{s, it, residual};
        }
        s = (1.0 - options.damping) * s + options.damping * g;
        if (!(s.imag() > 0.0)) {
            throw LsdInstabilityError(
                "solve_lsd: iterate left the upper half-plane at iteration " +
                std::to_string(it) + "; retry with smaller damping");
        }
    }
    throw LsdConvergenceError("solve_lsd: no convergence after " +
                                  std::to_string(options.max_iter) +
                                  " iterations (residual " + std::to_string(residual) + ")",
                              residual);
}

LsdSolution lsd_density_on_grid(double gamma, const DiscreteMeasure& H,
                                const std::vector<double>& x_grid, double epsilon,
                                const LsdOptions& options) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("lsd_density_on_grid: epsilon <= 0");
    if (!std::is_sorted(x_grid.begin(), x_grid.end())) {
        throw std::invalid_argument("lsd_density_on_grid: grid must be sorted");
    }

    LsdSolution out;
    out.gamma = gamma;
    out.H = H;
    out.grid = x_grid;
    out.epsilon = epsilon;
    out.zero_mass_flagged = H.has_atom_at(0.0);
    out.zero_mass = out.zero_mass_flagged ? 0.0 : std::max(0.0, 1.0 - 1.0 / gamma);

    std::complex<double> warm{0.0, 0.0};
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const std::complex<double> z{x_grid[i], epsilon};
        try {
            LsdOptions attempt = options;
            for (;;) {
                try {
                    const FixedPointResult res = solve_lsd(gamma, H, z, attempt, warm);
                    warm = res.s;
                    out.s_values.push_back(res.s);
                    out.density.push_back(res.s.imag() / kPi);
                    out.iterations.push_back(res.iterations);
                    out.residuals.push_back(res.residual);
                    break;
                } catch (const LsdInstabilityError&) {
                    // The documented remedy: smaller damping. Points deep in an
                    // atom-dominated region stay repelling and rethrow below.
                    if (attempt.damping <= options.damping / 16.0) throw;
                    attempt.damping *= 0.5;
                    attempt.max_iter *= 2;
                }
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("lsd_density_on_grid: grid index " +
                                     std::to_string(i) + " (x = " +
                                     std::to_string(x_grid[i]) + "): " + e.what());
        }
    }
    return out;
}

namespace {
struct ScaledCumulative {
    std::vector<double> raw; // trapezoid cumulative of the density
    double scale;            // multiplier making the total exactly 1 - zero_mass
};

// Refuses grids whose raw trapezoid mass is badly off the expected total.
ScaledCumulative scaled_cumulative(const LsdSolution& solution) {
    if (solution.grid.size() < 2) {
        throw std::invalid_argument("lsd solution needs at least 2 grid points");
    }
    ScaledCumulative sc{cumulative_trapezoid(solution.grid, solution.density), 1.0};
    const double target = 1.0 - solution.zero_mass;
    const double raw_total = sc.raw.back();
    if (std::abs(raw_total - target) > 0.05) {
        throw std::invalid_argument(
            "lsd solution not normalized: continuous mass " + std::to_string(raw_total) +
            " vs expected " + std::to_string(target) + "; widen or refine the grid");
    }
    sc.scale = raw_total > 0.0 ? target / raw_total : 1.0;
    return sc;
}
} // namespace

double lsd_cdf(const LsdSolution& solution, double x) {
    const ScaledCumulative sc = scaled_cumulative(solution);
    double mass = x >= 0.0 ? solution.zero_mass : 0.0;
    if (x <= solution.grid.front()) return mass;
    if (x >= solution.grid.back()) return mass + sc.scale * sc.raw.back();
    const auto it = std::upper_bound(solution.grid.begin(), solution.grid.end(), x);
    const auto hi = static_cast<std::size_t>(it - solution.grid.begin());
    const std::size_t lo = hi - 1;
    const double x0 = solution.grid[lo], x1 = solution.grid[hi];
    const double w = (x - x0) / (x1 - x0);
    const double f0 = solution.density[lo];
    const double fmid = f0 + (solution.density[hi] - f0) * w;
    return mass + sc.scale * (sc.raw[lo] + 0.5 * (f0 + fmid) * (x - x0));
}

std::vector<double> lsd_quantiles(const LsdSolution& solution,
                                  const std::vector<double>& q_list) {
    const ScaledCumulative sc = scaled_cumulative(solution);
    std::vector<double> out;
    out.reserve(q_list.size());
    for (double q : q_list) {
        if (!(q > 0.0 && q < 1.0)) {
            throw std::invalid_argument("lsd_quantiles: q outside (0,1)");
        }
        if (q <= solution.zero_mass) {
            out.push_back(0.0);
            continue;
        }
        const double target = (q - solution.zero_mass) / sc.scale;
        const auto it = std::lower_bound(sc.raw.begin(), sc.raw.end(), target);
        if (it == sc.raw.end()) {
            out.push_back(solution.grid.back());
            continue;
        }
        const auto hi = static_cast<std::size_t>(it - sc.raw.begin());
        if (hi == 0) {
            out.push_back(solution.grid.front());
            continue;
        }
        const std::size_t lo = hi - 1;
        const double span = sc.raw[hi] - sc.raw[lo];
        const double w = span > 0.0 ? (target - sc.raw[lo]) / span : 0.0;
        out.push_back(solution.grid[lo] + w * (solution.grid[hi] - solution.grid[lo]));
    }
    return out;
}

} // namespace corrspec
