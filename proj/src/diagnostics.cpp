#include "corrspec/diagnostics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "corrspec/parallel.hpp"
#include "corrspec/quadrature.hpp"
#include "corrspec/rng.hpp"
#include "corrspec/spectra.hpp"

namespace corrspec {

namespace {

constexpr int kBatches = 10;

int batch_of(int replicate, int replicates, int batches) {
    return static_cast<int>((static_cast<long long>(replicate) * batches) / replicates);
}

// Mean and batch-mean standard error of a replicate series.
ValueWithError batched(const std::vector<double>& values) {
    const int r = static_cast<int>(values.size());
    const int b = std::min(kBatches, r);
    std::vector<double> sums(b, 0.0);
    std::vector<int> counts(b, 0);
    double total = 0.0;
    for (int i = 0; i < r; ++i) {
        const int k = batch_of(i, r, b);
        sums[k] += values[i];
        ++counts[k];
        total += values[i];
    }
    const double mean = total / r;
    if (b < 2) return {mean, 0.0};
    double var = 0.0;
    for (int k = 0; k < b; ++k) {
        const double d = sums[k] / counts[k] - mean;
        var += d * d;
    }
    var /= (b - 1);
    return {mean, std::sqrt(var / b)};
}

} // namespace

Eigen::MatrixXcd resolvent_without_row(const SampleEnsemble& ensemble,
                                       std::complex<double> z, int row) {
    if (!(z.imag() > 0.0)) {
        throw std::domain_error("resolvent_without_row: Im z must be positive");
    }
    if (row < 0 || row >= ensemble.p) {
        throw std::out_of_range("resolvent_without_row: row index out of range");
    }
    Eigen::MatrixXd gram = ensemble.Y.transpose() * ensemble.Y;
    gram.noalias() -= ensemble.Y.row(row).transpose() * ensemble.Y.row(row);
    Eigen::MatrixXcd shifted = gram.cast<std::complex<double>>();
    shifted.diagonal().array() -= z;
    return shifted.partialPivLu().inverse();
}

namespace {

ResolventDiagnostics compute_w_for_row(const SampleEnsemble& ensemble,
                                       std::complex<double> z, int row) {
    const Eigen::MatrixXcd d = resolvent_without_row(ensemble, z, row);
    const Eigen::VectorXcd yk =
        ensemble.Y.row(row).transpose().cast<std::complex<double>>();
    const int n = ensemble.n;

    const std::complex<double> quad = (yk.transpose() * (d * yk))(0, 0);
    const std::complex<double> trace_over_n = d.trace() / static_cast<double>(n);
    std::complex<double> diag_quad = 0.0;
    for (int i = 0; i < n; ++i) diag_quad += d(i, i) * yk[i] * yk[i];

    ResolventDiagnostics out;
    out.z = z;
    out.w_n = quad - trace_over_n;
    out.w_n1 = diag_quad - trace_over_n;
    out.w_n2 = quad - diag_quad;
    out.trace_d_over_n = trace_over_n;
    out.bound_ok = std::abs(out.w_n) <= 2.0 / z.imag() + 1e-10;
    return out;
}

} // namespace

ResolventDiagnostics compute_w(const SampleEnsemble& ensemble, std::complex<double> z,
                               int average_rows) {
    if (average_rows < 1 || average_rows > ensemble.p) {
        throw std::invalid_argument("compute_w: average_rows outside [1, p]");
    }
    ResolventDiagnostics out = compute_w_for_row(ensemble, z, 0);
    for (int k = 1; k < average_rows; ++k) {
        const ResolventDiagnostics part = compute_w_for_row(ensemble, z, k);
        out.w_n += part.w_n;
        out.w_n1 += part.w_n1;
        out.w_n2 += part.w_n2;
        out.trace_d_over_n += part.trace_d_over_n;
        out.bound_ok = out.bound_ok && part.bound_ok;
    }
    const double scale = 1.0 / average_rows;
    out.w_n *= scale;
    out.w_n1 *= scale;
    out.w_n2 *= scale;
    out.trace_d_over_n *= scale;
    return out;
}

ComplexWithError master_equation_residual(const PopulationModel& model,
                                          const DistributionSpec& spec, int n,
                                          std::complex<double> z, int replicates,
                                          std::uint64_t seed, int threads) {
    if (model.mode() != PopulationMode::Identity) {
        throw std::domain_error(
            "master_equation_residual: supported for the identity model only");
    }
    if (replicates < 2) {
        throw std::invalid_argument("master_equation_residual: replicates must be >= 2");
    }
    const int p = model.dim();
    const double gamma = static_cast<double>(p) / n;

    std::vector<std::complex<double>> s_n(replicates), w_n(replicates);
    parallel_for(replicates, threads, [&](int r) {
        const SampleEnsemble ens =
            generate(model, spec, n, derive_stream_key(seed, 0, static_cast<std::uint64_t>(r)));
        s_n[r] = symmetric_eigenvalues(ens.R).stieltjes(z);
        w_n[r] = compute_w(ens, z).w_n;
    });

    auto residual_of = [&](const std::vector<int>& idx) {
        std::complex<double> s_bar = 0.0;
        for (int r : idx) s_bar += s_n[r];
        s_bar /= static_cast<double>(idx.size());
        std::complex<double> rhs = 0.0;
        for (int r : idx) {
            rhs += 1.0 / (1.0 + w_n[r] + gamma * s_bar - (1.0 - gamma) / z);
        }
        rhs /= static_cast<double>(idx.size());
        return -z * s_bar - rhs;
    };

    std::vector<int> all(replicates);
    for (int r = 0; r < replicates; ++r) all[r] = r;
    const std::complex<double> residual = residual_of(all);

    const int b = std::min(kBatches, replicates);
    std::vector<std::vector<int>> batches(b);
    for (int r = 0; r < replicates; ++r) batches[batch_of(r, replicates, b)].push_back(r);
    std::complex<double> batch_mean = 0.0;
    std::vector<std::complex<double>> batch_res(b);
    for (int k = 0; k < b; ++k) {
        batch_res[k] = residual_of(batches[k]);
        batch_mean += batch_res[k];
    }
    batch_mean /= static_cast<double>(b);
    double var = 0.0;
    for (int k = 0; k < b; ++k) {
        var += std::norm(batch_res[k] - batch_mean);
    }
    var /= (b - 1);

    return ComplexWithError{residual, std::sqrt(var / b)};
}

MomentReport moment_estimates(const PopulationModel& model, const DistributionSpec& spec,
                              int n, int replicates, std::uint64_t seed, int threads) {
    if (replicates < 2) {
        throw std::invalid_argument("moment_estimates: replicates must be >= 2");
    }
    const int p = model.dim();

    std::vector<double> fourth(replicates), cross(replicates), mixed(replicates);
    Eigen::MatrixXd row_means(p, replicates); // per-row column-averaged first moments

    parallel_for(replicates, threads, [&](int r) {
        const SampleEnsemble ens =
            generate(model, spec, n, derive_stream_key(seed, 0, static_cast<std::uint64_t>(r)));
        const Eigen::MatrixXd& y = ens.Y;

        // n E[Y_11^4]: each row contributes sum_j Y_kj^4.
        fourth[r] = y.array().pow(4).rowwise().sum().mean();

        // n E[Y_11 Y_12] via (sum_j Y_kj)^2 - 1 = sum_{j != j'} Y_kj Y_kj'.
        const Eigen::VectorXd row_sums = y.rowwise().sum();
        cross[r] = (row_sums.array().square() - 1.0).mean() / (n - 1);

        // sum_{i,k} E[Y_k1^2 Y_i1^2] = E[(sum_k Y_k1^2)^2], averaged over columns.
        mixed[r] = y.array().square().colwise().sum().square().mean();

        row_means.col(r) = y.rowwise().mean();
    });

    MomentReport report;
    report.replicates = replicates;
    report.n_E_Y4 = batched(fourth);
    report.n_E_Y1Y2 = batched(cross);
    {
        double acc = 0.0;
        for (double v : mixed) acc += v;
        report.mixed_second_sum = acc / replicates;
    }

    double max_val = 0.0, max_se = 0.0;
    std::vector<double> series(replicates);
    for (int k = 0; k < p; ++k) {
        for (int r = 0; r < replicates; ++r) series[r] = row_means(k, r);
        const ValueWithError row = batched(series);
        max_val = std::max(max_val, n * std::abs(row.value));
        max_se = std::max(max_se, n * row.std_error);
    }
    report.n_max_first_moment = {max_val, max_se};
    return report;
}

namespace {

enum class LaplaceMomentKind { Fourth, Cross };

double laplace_moment_integrand(const LaplaceProfile& profile, LaplaceMomentKind kind,
                                int n, double t) {
    if (t <= 0.0) return 0.0;
    const double ph = profile.phi(t);
    if (ph <= 0.0) return 0.0;
    if (kind == LaplaceMomentKind::Fourth) {
        return t * std::pow(ph, n - 1) * profile.phi_d2(t);
    }
    const double ps = profile.psi(t);
    return ps * ps * std::pow(ph, n - 2);
}

// Scale on which phi^{n-1} turns over: the t with (n-1)(1 - phi(t)) = 1. The
// integrands below concentrate around it (as small as ~n^-2 for heavy tails),
// so integration runs in units of this scale.
double laplace_turnover_scale(const LaplaceProfile& profile, int n) {
    const double target = 1.0 / (n - 1.0);
    double hi = 1.0;
    while (1.0 - profile.phi(hi) < target && hi < 1e12) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (1.0 - profile.phi(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double laplace_moment_value(const LaplaceProfile& profile, LaplaceMomentKind kind,
                            int n, double* abs_error) {
    const double scale = laplace_turnover_scale(profile, n);
    // In units of the turnover scale the integrand decays like
    // exp(-x^(alpha/2)) when xi^2 has tail index alpha/2 < 1; substituting
    // x = w^(2/alpha) straightens both that tail and the x -> 0 singularity
    // of phi''. Finite-variance laws keep power = 1.
    const auto tail = profile.spec().tail_index();
    const double power = (tail && *tail < 2.0) ? *tail / 2.0 : 1.0;
    auto integrand = [&, power](double w) {
        if (w <= 0.0) return 0.0;
        const double x = std::pow(w, 1.0 / power);
        const double jacobian = (1.0 / power) * std::pow(w, 1.0 / power - 1.0);
        return scale * jacobian *
               laplace_moment_integrand(profile, kind, n, scale * x);
    };
    if (profile.mode() == LaplaceMode::MonteCarlo) {
        // Adaptive refinement on a noisy integrand never settles; use a fixed
        // high-order rule on the mapped half line instead.
        using Gauss = boost::math::quadrature::gauss<double, 61>;
        auto mapped = [&](double u) {
            const double om = 1.0 - u;
            return integrand(u / om) / (om * om);
        };
        if (abs_error) *abs_error = std::numeric_limits<double>::quiet_NaN();
        return Gauss::integrate(mapped, 0.0, 1.0);
    }
    // Closed-form profiles are cheap to evaluate; quadrature-mode ones pay an
    // inner integral per point and already carry a 1e-10 evaluator tolerance.
    const double tol = profile.mode() == LaplaceMode::ClosedForm ? 1e-12 : 1e-9;
    return integrate_halfline_mapped(integrand, tol, abs_error);
}

MomentIntegral laplace_moment(const LaplaceProfile& profile, LaplaceMomentKind kind, int n) {
    MomentIntegral out;
    out.value = laplace_moment_value(profile, kind, n, &out.abs_error);
    if (profile.mode() == LaplaceMode::MonteCarlo) {
        // Half-sample split as a degraded-precision error scale.
        const auto halves = profile.mc_halves();
        const double i1 = laplace_moment_value(halves.first, kind, n, nullptr);
        const double i2 = laplace_moment_value(halves.second, kind, n, nullptr);
        out.mc_std_error = 0.5 * std::abs(i1 - i2);
    }
    return out;
}

} // namespace

MomentIntegral laplace_fourth_moment(const LaplaceProfile& profile, int n) {
    if (n < 2) throw std::invalid_argument("laplace_fourth_moment: n must be >= 2");
    return laplace_moment(profile, LaplaceMomentKind::Fourth, n);
}

MomentIntegral laplace_cross_moment(const LaplaceProfile& profile, int n) {
    if (n < 3) throw std::invalid_argument("laplace_cross_moment: n must be >= 3");
    if (profile.symmetric()) {
        return MomentIntegral{0.0, 0.0, std::nullopt}; // psi vanishes identically
    }
    return laplace_moment(profile, LaplaceMomentKind::Cross, n);
}

} // namespace corrspec
