#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "corrspec/distributions.hpp"

namespace corrspec {

enum class LaplaceMode { ClosedForm, Quadrature, MonteCarlo };

/// Laplace-transform data of the squared entry law:
///   phi(s)    = E[exp(-s xi^2)]
///   phi_d1(s) = phi'(s)  = -E[xi^2 exp(-s xi^2)]
///   phi_d2(s) = phi''(s) =  E[xi^4 exp(-s xi^2)]
///   psi(s)    = E[xi exp(-s xi^2)]   (identically 0 for symmetric laws)
///
/// The Gaussian profile is closed-form; the other laws are evaluated by
/// adaptive quadrature of their densities (absolute tolerance <= 1e-10), or
/// by Monte Carlo with a reported standard error.
class LaplaceProfile {
public:
    double phi(double s) const;
    double phi_d1(double s) const;
    double phi_d2(double s) const;
    double psi(double s) const;

    LaplaceMode mode() const noexcept { return mode_; }
    const DistributionSpec& spec() const noexcept { return spec_; }
    bool symmetric() const noexcept { return spec_.is_symmetric(); }

    /// Absolute tolerance of the quadrature evaluators (closed form: 0).
    double abs_tol() const noexcept;
    /// Monte Carlo standard error of phi(s); only meaningful in MC mode.
    double phi_standard_error(double s) const;
    /// Splits the stored draws into two half-sample profiles (MC mode only),
    /// used for half-sample error estimates of derived integrals.
    std::pair<LaplaceProfile, LaplaceProfile> mc_halves() const;

private:
    friend LaplaceProfile laplace_profile(const DistributionSpec&);
    friend LaplaceProfile laplace_profile_monte_carlo(const DistributionSpec&,
                                                      std::size_t, std::uint64_t);
    LaplaceProfile(const DistributionSpec& spec, LaplaceMode mode)
        : spec_(spec), mode_(mode) {}

    void require_valid_s(double s) const;

    DistributionSpec spec_;
    LaplaceMode mode_;
    std::shared_ptr<const std::vector<double>> mc_draws_;  // MC mode only
};

/// Closed form for the Gaussian, adaptive quadrature otherwise.
LaplaceProfile laplace_profile(const DistributionSpec& spec);

/// Monte Carlo evaluator backed by `draws` stored samples; every functional
/// reports means over the same draws.
LaplaceProfile laplace_profile_monte_carlo(const DistributionSpec& spec,
                                           std::size_t draws = 1'000'000,
                                           std::uint64_t seed = 0);

} // namespace corrspec
