#include "corrspec/laplace.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "corrspec/quadrature.hpp"

namespace corrspec {

namespace {

constexpr double kQuadTol = 1e-12;

// Density of the standardized Student t with `nu` degrees of freedom.
double student_t_density_standardized(double x, double nu) {
    const double c = std::sqrt(nu / (nu - 2.0)); // xi = T / c
    const double t = x * c;
    const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                            0.5 * std::log(nu * std::numbers::pi);
    return c * std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

// E[g(xi) exp(-s xi^2)] by quadrature against the law of xi.
double quad_expectation(const DistributionSpec& spec, double s, int xi_power) {
    switch (spec.kind()) {
    case DistKind::StudentT: {
        const double nu = spec.parameter();
        auto f = [=](double x) {
            return std::pow(x, xi_power) * std::exp(-s * x * x) *
                   student_t_density_standardized(x, nu);
        };
        if (xi_power % 2 == 1) return 0.0; // symmetric law
        constexpr double inf = std::numeric_limits<double>::infinity();
        return 2.0 * integrate(f, 0.0, inf, kQuadTol);
    }
    case DistKind::SymmetrizedPareto: {
        // |xi| = u^{-1/alpha} with u uniform on (0,1); odd moments vanish.
        if (xi_power % 2 == 1) return 0.0;
        const double alpha = spec.parameter();
        auto f = [=](double u) {
            const double xi2 = std::pow(u, -2.0 / alpha);
            const double weight = xi_power == 0 ? 1.0
                                : xi_power == 2 ? xi2
                                                : xi2 * xi2;
            const double e = std::exp(-s * xi2);
            return e == 0.0 ? 0.0 : weight * e;
        };
        return integrate(f, 0.0, 1.0, kQuadTol);
    }
    case DistKind::CenteredExponential: {
        // xi = E - 1, density exp(-(x+1)) on (-1, inf).
        auto f = [=](double x) {
            return std::pow(x, xi_power) * std::exp(-s * x * x - (x + 1.0));
        };
        constexpr double inf = std::numeric_limits<double>::infinity();
        return integrate(f, -1.0, inf, kQuadTol);
    }
    case DistKind::Gaussian:
        break; // closed form; not reached
    }
    throw std::logic_error("quad_expectation: unsupported law");
}

} // namespace

void LaplaceProfile::require_valid_s(double s) const {
    if (s < 0.0 || !std::isfinite(s)) {
        throw std::domain_error("LaplaceProfile: s must be nonnegative");
    }
}

double LaplaceProfile::phi(double s) const {
    require_valid_s(s);
    if (s == 0.0) return 1.0;
    switch (mode_) {
    case LaplaceMode::ClosedForm:
        return 1.0 / std::sqrt(1.0 + 2.0 * s);
    case LaplaceMode::Quadrature:
        return quad_expectation(spec_, s, 0);
    case LaplaceMode::MonteCarlo: {
        double acc = 0.0;
        for (double x : *mc_draws_) acc += std::exp(-s * x * x);
        return acc / static_cast<double>(mc_draws_->size());
    }
    }
    return 0.0;
}

double LaplaceProfile::phi_d1(double s) const {
    require_valid_s(s);
    switch (mode_) {
    case LaplaceMode::ClosedForm:
        return -std::pow(1.0 + 2.0 * s, -1.5);
    case LaplaceMode::Quadrature:
        if (s == 0.0) throw std::domain_error("phi_d1: quadrature mode requires s > 0");
        return -quad_expectation(spec_, s, 2);
    case LaplaceMode::MonteCarlo: {
        double acc = 0.0;
        for (double x : *mc_draws_) acc += x * x * std::exp(-s * x * x);
        return -acc / static_cast<double>(mc_draws_->size());
    }
    }
    return 0.0;
}

double LaplaceProfile::phi_d2(double s) const {
    require_valid_s(s);
    switch (mode_) {
    case LaplaceMode::ClosedForm:
        return 3.0 * std::pow(1.0 + 2.0 * s, -2.5);
    case LaplaceMode::Quadrature:
        if (s == 0.0) throw std::domain_error("phi_d2: quadrature mode requires s > 0");
        return quad_expectation(spec_, s, 4);
    case LaplaceMode::MonteCarlo: {
        double acc = 0.0;
        for (double x : *mc_draws_) {
            const double x2 = x * x;
            acc += x2 * x2 * std::exp(-s * x2);
        }
        return acc / static_cast<double>(mc_draws_->size());
    }
    }
    return 0.0;
}

double LaplaceProfile::psi(double s) const {
    require_valid_s(s);
    if (spec_.is_symmetric()) return 0.0; // odd integrand under a symmetric law
    if (s == 0.0) return 0.0;             // E[xi] = 0 by centering
    switch (mode_) {
    case LaplaceMode::Quadrature:
        return quad_expectation(spec_, s, 1);
    case LaplaceMode::MonteCarlo: {
        double acc = 0.0;
        for (double x : *mc_draws_) acc += x * std::exp(-s * x * x);
        return acc / static_cast<double>(mc_draws_->size());
    }
    case LaplaceMode::ClosedForm:
        break;
    }
    return 0.0;
}

double LaplaceProfile::abs_tol() const noexcept {
    switch (mode_) {
    case LaplaceMode::ClosedForm:
        return 0.0;
    case LaplaceMode::Quadrature:
        return 1e-10;
    case LaplaceMode::MonteCarlo:
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

double LaplaceProfile::phi_standard_error(double s) const {
    if (mode_ != LaplaceMode::MonteCarlo) return 0.0;
    require_valid_s(s);
    const auto& xs = *mc_draws_;
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : xs) {
        const double v = std::exp(-s * x * x);
        ++k;
        const double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }
    const auto n = static_cast<double>(xs.size());
    return std::sqrt(m2 / (n - 1.0) / n);
}

LaplaceProfile laplace_profile(const DistributionSpec& spec) {
    const auto mode = spec.kind() == DistKind::Gaussian ? LaplaceMode::ClosedForm
                                                        : LaplaceMode::Quadrature;
    return LaplaceProfile(spec, mode);
}

std::pair<LaplaceProfile, LaplaceProfile> LaplaceProfile::mc_halves() const {
    if (mode_ != LaplaceMode::MonteCarlo || !mc_draws_ || mc_draws_->size() < 4) {
        throw std::logic_error("mc_halves: requires a Monte Carlo profile with >= 4 draws");
    }
    const auto mid = mc_draws_->begin() + static_cast<std::ptrdiff_t>(mc_draws_->size() / 2);
    LaplaceProfile first(spec_, LaplaceMode::MonteCarlo);
    first.mc_draws_ =
        std::make_shared<const std::vector<double>>(mc_draws_->begin(), mid);
    LaplaceProfile second(spec_, LaplaceMode::MonteCarlo);
    second.mc_draws_ =
        std::make_shared<const std::vector<double>>(mid, mc_draws_->end());
    return {first, second};
}

LaplaceProfile laplace_profile_monte_carlo(const DistributionSpec& spec,
                                           std::size_t draws, std::uint64_t seed) {
    if (draws < 2) throw std::invalid_argument("laplace_profile_monte_carlo: draws < 2");
    LaplaceProfile profile(spec, LaplaceMode::MonteCarlo);
    profile.mc_draws_ =
        std::make_shared<const std::vector<double>>(sample(spec, draws, seed));
    return profile;
}

} // namespace corrspec
