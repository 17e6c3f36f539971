#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>

#include "corrspec/ensemble.hpp"
#include "corrspec/laplace.hpp"

namespace corrspec {

/// D(z) = (Y^T Y - yk^T yk - z I)^{-1} for row k of Y (first row by
/// convention), computed by direct LU factorization of the shifted matrix.
/// Operator norm <= 1/Im(z).
Eigen::MatrixXcd resolvent_without_row(const SampleEnsemble& ensemble,
                                       std::complex<double> z, int row);

inline Eigen::MatrixXcd resolvent_first_row(const SampleEnsemble& ensemble,
                                            std::complex<double> z) {
    return resolvent_without_row(ensemble, z, 0);
}

/// The quadratic form W_n(z) = y1 D(z) y1^T - tr D(z)/n and its split into a
/// diagonal part W_n1 (only diag D enters) and off-diagonal remainder W_n2.
struct ResolventDiagnostics {
    std::complex<double> z;
    std::complex<double> w_n;
    std::complex<double> w_n1;
    std::complex<double> w_n2;
    std::complex<double> trace_d_over_n;
    bool bound_ok; // |W_n| <= 2/Im(z) (+1e-10 rounding slack)
};

/// average_rows > 1 averages the diagnostics of the leading rows, a variance
/// reduction that relies on the rows being exchangeable (identity model).
ResolventDiagnostics compute_w(const SampleEnsemble& ensemble, std::complex<double> z,
                               int average_rows = 1);

struct ValueWithError {
    double value = 0.0;
    double std_error = 0.0;
};

struct ComplexWithError {
    std::complex<double> value;
    double std_error = 0.0; // sqrt(Var(Re) + Var(Im)) of the batch means
};

/// Residual of the self-consistency relation
///   -z E[s_n(z)] = E[ 1 / (1 + W_n(z) + gamma E[s_n(z)] - (1-gamma)/z) ]
/// with expectations replaced by replicate means and gamma by p/n. Identity
/// model only; std_error comes from batch means (10 batches).
ComplexWithError master_equation_residual(const PopulationModel& model,
                                          const DistributionSpec& spec, int n,
                                          std::complex<double> z, int replicates,
                                          std::uint64_t seed, int threads = 1);

/// Replicate-mean estimators of the self-normalized moment diagnostics.
struct MomentReport {
    ValueWithError n_E_Y4;            ///< n E[Y_11^4], averaged over rows/columns
    ValueWithError n_E_Y1Y2;          ///< n E[Y_11 Y_12] via row-sum identity
    ValueWithError n_max_first_moment;///< max_k n |E[Y_k1]|; std_error = max row SE
    double mixed_second_sum = 0.0;    ///< sum_{i,k} E[Y_k1^2 Y_i1^2]
    int replicates = 0;
};

/// Deterministic given seed; replicate streams derive from (seed, replicate).
MomentReport moment_estimates(const PopulationModel& model, const DistributionSpec& spec,
                              int n, int replicates, std::uint64_t seed, int threads = 1);

struct MomentIntegral {
    double value = 0.0;
    double abs_error = 0.0;                 // quadrature error estimate
    std::optional<double> mc_std_error;     // set when the profile is Monte Carlo
};

/// E[Y_11^4] = int_0^inf t phi(t)^{n-1} phi''(t) dt  (identity model).
MomentIntegral laplace_fourth_moment(const LaplaceProfile& profile, int n);

/// E[Y_11 Y_12] = int_0^inf psi(s)^2 phi(s)^{n-2} ds; nonnegative, and zero
/// exactly for symmetric laws.
MomentIntegral laplace_cross_moment(const LaplaceProfile& profile, int n);

} // namespace corrspec
