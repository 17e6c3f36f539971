#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrspec/rng.hpp"

namespace corrspec {

enum class DistKind {
    Gaussian,
    StudentT,
    SymmetrizedPareto,
    CenteredExponential,
};

/// A generic entry law: centered, and standardized to unit variance whenever
/// the variance is finite (the symmetrized Pareto is left on its natural
/// scale; row self-normalization makes scale irrelevant downstream).
class DistributionSpec {
public:
    static DistributionSpec gaussian();
    /// Standardized Student t; requires dof > 2 so the variance exists.
    static DistributionSpec student_t(double dof);
    /// |xi| Pareto with survival x^-alpha on [1,inf), independent random sign.
    static DistributionSpec symmetrized_pareto(double alpha);
    /// xi = E - 1 with E standard exponential.
    static DistributionSpec centered_exponential();

    DistKind kind() const noexcept { return kind_; }
    /// dof for StudentT, alpha for SymmetrizedPareto, unused otherwise.
    double parameter() const noexcept { return param_; }

    bool has_finite_variance() const noexcept;
    bool is_symmetric() const noexcept;
    std::optional<double> tail_index() const noexcept;

    /// Short identifier used in output file names, e.g. "gaussian", "t3".
    std::string name() const;

    /// One variate from the stream. Consumes a fixed number of uniforms per
    /// draw (2 for Gaussian/StudentT/SymmetrizedPareto, 1 for
    /// CenteredExponential), so streams can be sliced by counting.
    double draw(RngStream& stream) const noexcept;

private:
    DistributionSpec(DistKind kind, double param) : kind_(kind), param_(param) {}
    DistKind kind_;
    double param_ = 0.0;
};

/// i.i.d. sample of size count; bit-identical for identical (spec, count, seed).
std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           std::uint64_t seed);

} // namespace corrspec
