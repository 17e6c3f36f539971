#include "corrspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace corrspec {

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<double> eigenvalues_descending)
    : desc_(std::move(eigenvalues_descending)) {
    if (desc_.empty()) throw std::invalid_argument("EmpiricalSpectrum: empty spectrum");
    if (!std::is_sorted(desc_.begin(), desc_.end(), std::greater<>())) {
        throw std::invalid_argument("EmpiricalSpectrum: eigenvalues must be descending");
    }
    asc_.assign(desc_.rbegin(), desc_.rend());
}

double EmpiricalSpectrum::cdf(double x) const {
    const auto it = std::upper_bound(asc_.begin(), asc_.end(), x);
    return static_cast<double>(it - asc_.begin()) / static_cast<double>(asc_.size());
}

double EmpiricalSpectrum::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument("quantile: q must lie in (0,1)");
    }
    const auto p = static_cast<double>(asc_.size());
    const auto idx = static_cast<std::size_t>(std::ceil(q * p)) - 1;
    return asc_[std::min(idx, asc_.size() - 1)];
}

std::complex<double> EmpiricalSpectrum::stieltjes(std::complex<double> z) const {
    if (!(z.imag() > 0.0)) throw std::domain_error("stieltjes: Im z must be positive");
    std::complex<double> acc = 0.0;
    for (double lambda : desc_) acc += 1.0 / (lambda - z);
    return acc / static_cast<double>(desc_.size());
}

EmpiricalSpectrum symmetric_eigenvalues(const Eigen::MatrixXd& A, bool verify) {
    if (A.rows() != A.cols()) {
        throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    }
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
        throw std::invalid_argument("symmetric_eigenvalues: max |A - A^T| exceeds 1e-8");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        A, verify ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("symmetric_eigenvalues: eigensolver failed");
    }
    const Eigen::VectorXd& ev = es.eigenvalues(); // ascending

    if (verify) {
        const double scale = std::max(1.0, std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1])));
        for (int i = 0; i < ev.size(); ++i) {
            const Eigen::VectorXd v = es.eigenvectors().col(i);
            const double residual = (A * v - ev[i] * v).norm();
            if (residual > 1e-8 * scale) {
                throw std::runtime_error(
                    "symmetric_eigenvalues: eigenpair residual " + std::to_string(residual) +
                    " exceeds bound for eigenvalue " + std::to_string(ev[i]));
            }
        }
    }

    std::vector<double> desc(ev.data(), ev.data() + ev.size());
    std::reverse(desc.begin(), desc.end());
    return EmpiricalSpectrum(std::move(desc));
}

namespace {
std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string spectrum_csv(const EmpiricalSpectrum& spectrum) {
    std::string out = "index,eigenvalue\n";
    const auto& eig = spectrum.eigenvalues();
    for (std::size_t i = 0; i < eig.size(); ++i) {
        out += std::to_string(i) + "," + csv_number(eig[i]) + "\n";
    }
    return out;
}

std::string quantile_table_csv(const EmpiricalSpectrum& spectrum,
                               const std::vector<double>& q_list) {
    std::string out = "q,value\n";
    for (double q : q_list) {
        out += csv_number(q) + "," + csv_number(spectrum.quantile(q)) + "\n";
    }
    return out;
}

double ks_distance(const EmpiricalSpectrum& spectrum,
                   const std::function<double(double)>& cdf) {
    const auto& desc = spectrum.eigenvalues();
    const auto p = static_cast<double>(desc.size());
    double sup = 0.0;
    // Walk atoms ascending; F jumps from i/p to (i+count)/p at each distinct
    // atom. Both F and the reference are taken at the two one-sided limits, so
    // a spectrum compared against its own step CDF scores exactly 0.
    std::vector<double> asc(desc.rbegin(), desc.rend());
    std::size_t i = 0;
    while (i < asc.size()) {
        std::size_t j = i;
        while (j < asc.size() && asc[j] == asc[i]) ++j;
        const double ref_at = cdf(asc[i]);
        const double ref_below =
            cdf(std::nextafter(asc[i], -std::numeric_limits<double>::infinity()));
        const double below = static_cast<double>(i) / p;
        const double above = static_cast<double>(j) / p;
        sup = std::max({sup, std::abs(below - ref_below), std::abs(above - ref_at)});
        i = j;
    }
    return sup;
}

} // namespace corrspec
