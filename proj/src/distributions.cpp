#include "corrspec/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corrspec {

DistributionSpec DistributionSpec::gaussian() {
    return DistributionSpec(DistKind::Gaussian, 0.0);
}

DistributionSpec DistributionSpec::student_t(double dof) {
    if (!(dof > 2.0)) {
        throw std::invalid_argument(
            "student_t: dof must exceed 2 (got " + std::to_string(dof) +
            "); the standardized t law needs a finite variance");
    }
    return DistributionSpec(DistKind::StudentT, dof);
}

DistributionSpec DistributionSpec::symmetrized_pareto(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("symmetrized_pareto: alpha must be positive (got " +
                                    std::to_string(alpha) + ")");
    }
    return DistributionSpec(DistKind::SymmetrizedPareto, alpha);
}

DistributionSpec DistributionSpec::centered_exponential() {
    return DistributionSpec(DistKind::CenteredExponential, 0.0);
}

bool DistributionSpec::has_finite_variance() const noexcept {
    switch (kind_) {
    case DistKind::Gaussian:
    case DistKind::StudentT:
    case DistKind::CenteredExponential:
        return true;
    case DistKind::SymmetrizedPareto:
        return param_ > 2.0;
    }
    return false;
}

bool DistributionSpec::is_symmetric() const noexcept {
    return kind_ != DistKind::CenteredExponential;
}

std::optional<double> DistributionSpec::tail_index() const noexcept {
    switch (kind_) {
    case DistKind::StudentT:
    case DistKind::SymmetrizedPareto:
        return param_;
    default:
        return std::nullopt;
    }
}

std::string DistributionSpec::name() const {
    auto trim = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    };
    switch (kind_) {
    case DistKind::Gaussian:
        return "gaussian";
    case DistKind::StudentT:
        return "t" + trim(param_);
    case DistKind::SymmetrizedPareto:
        return "pareto" + trim(param_);
    case DistKind::CenteredExponential:
        return "cexp";
    }
    return "unknown";
}

double DistributionSpec::draw(RngStream& stream) const noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind_) {
    case DistKind::Gaussian: {
        // Box-Muller, cosine branch only.
        const double u = stream.next_uniform();
        const double v = stream.next_uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
    }
    case DistKind::StudentT: {
        // Bailey's exact polar transform: sqrt(nu (U^(-2/nu) - 1)) cos(2 pi V)
        // is t with nu degrees of freedom; divide by sqrt(nu/(nu-2)).
        const double nu = param_;
        const double u = stream.next_uniform();
        const double v = stream.next_uniform();
        const double r2 = nu * (std::pow(u, -2.0 / nu) - 1.0);
        const double t = std::sqrt(r2) * std::cos(two_pi * v);
        return t / std::sqrt(nu / (nu - 2.0));
    }
    case DistKind::SymmetrizedPareto: {
        const double u = stream.next_uniform();
        const double v = stream.next_uniform();
        const double magnitude = std::pow(u, -1.0 / param_);
        return v < 0.5 ? -magnitude : magnitude;
    }
    case DistKind::CenteredExponential:
        return -std::log(stream.next_uniform()) - 1.0;
    }
    return 0.0;
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t count,
                           std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    RngStream stream(seed);
    std::vector<double> out(count);
    for (auto& x : out) x = spec.draw(stream);
    return out;
}

} // namespace corrspec
