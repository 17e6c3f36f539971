#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace corrspec {

/// Empirical spectral distribution of a symmetric matrix: the uniform measure
/// on its eigenvalues, kept sorted descending.
class EmpiricalSpectrum {
public:
    explicit EmpiricalSpectrum(std::vector<double> eigenvalues_descending);

    const std::vector<double>& eigenvalues() const noexcept { return desc_; }
    int source_dim() const noexcept { return static_cast<int>(desc_.size()); }

    /// F(x) = fraction of eigenvalues <= x (right-continuous step function).
    double cdf(double x) const;

    /// Left-continuous generalized inverse: smallest eigenvalue with F >= q.
    double quantile(double q) const;

    /// (1/p) sum 1/(lambda_i - z); requires Im z > 0, returns a value in C+.
    std::complex<double> stieltjes(std::complex<double> z) const;

private:
    std::vector<double> desc_; // descending
    std::vector<double> asc_;  // same values ascending, for cdf/quantile
};

/// Eigenvalues of a symmetric matrix, sorted descending. Rejects inputs with
/// max |A - A^T| > 1e-8. With verify = true also runs the residual check
/// ||A v - lambda v|| <= 1e-8 * max(1, ||A||) on every eigenpair.
EmpiricalSpectrum symmetric_eigenvalues(const Eigen::MatrixXd& A, bool verify = false);

/// Kolmogorov-Smirnov distance between the spectrum's step CDF and a monotone
/// reference CDF, evaluated at both sides of every atom.
double ks_distance(const EmpiricalSpectrum& spectrum,
                   const std::function<double(double)>& cdf);

/// CSV export, header "index,eigenvalue", descending order.
std::string spectrum_csv(const EmpiricalSpectrum& spectrum);

/// CSV export of a quantile table, header "q,value".
std::string quantile_table_csv(const EmpiricalSpectrum& spectrum,
                               const std::vector<double>& q_list);

} // namespace corrspec
