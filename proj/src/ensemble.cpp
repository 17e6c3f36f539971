#include "corrspec/ensemble.hpp"

#include <cmath>

#include "corrspec/rng.hpp"
#include "corrspec/spectra.hpp"

namespace corrspec {

SampleEnsemble generate(const PopulationModel& model, const DistributionSpec& spec,
                        int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate: n must be >= 2");
    const int p = model.dim();

    SampleEnsemble ens;
    ens.p = p;
    ens.n = n;
    ens.seed = seed;

    RngStream stream(seed);
    ens.Xtilde.resize(p, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < p; ++i) ens.Xtilde(i, j) = spec.draw(stream);
    }

    ens.X = model.mode() == PopulationMode::Identity ? ens.Xtilde
                                                     : model.sqrt_factor() * ens.Xtilde;

    Eigen::VectorXd row_norms = ens.X.rowwise().norm();
    for (int i = 0; i < p; ++i) {
        if (row_norms[i] < 1e-300) {
            throw DegenerateSampleError("generate: row " + std::to_string(i) +
                                        " of X is identically zero");
        }
    }

    ens.S = (ens.X * ens.X.transpose()) / static_cast<double>(n);
    Eigen::VectorXd m = ens.S.diagonal().array().rsqrt();
    ens.R = m.asDiagonal() * ens.S * m.asDiagonal();
    ens.Y = (m.asDiagonal() * ens.X) / std::sqrt(static_cast<double>(n));
    return ens;
}

Eigen::MatrixXd self_normalize_rows(const Eigen::MatrixXd& X) {
    Eigen::VectorXd inv_norms = X.rowwise().norm().cwiseInverse();
    return inv_norms.asDiagonal() * X;
}

double companion_eigen_check(const SampleEnsemble& ensemble) {
    const EmpiricalSpectrum spec_r = symmetric_eigenvalues(ensemble.R);
    const Eigen::MatrixXd gram = ensemble.Y.transpose() * ensemble.Y;
    const EmpiricalSpectrum spec_g = symmetric_eigenvalues(gram);

    const int m = std::min(ensemble.p, ensemble.n);
    double gap = 0.0;
    for (int i = 0; i < m; ++i) {
        gap = std::max(gap, std::abs(spec_r.eigenvalues()[i] - spec_g.eigenvalues()[i]));
    }
    return gap;
}

RowRemovedView remove_row_view(const SampleEnsemble& ensemble, int k) {
    if (k < 0 || k >= ensemble.p) {
        throw std::out_of_range("remove_row_view: row index " + std::to_string(k) +
                                " outside [0, " + std::to_string(ensemble.p) + ")");
    }
    return RowRemovedView{
        ensemble.Y.row(k),
        ensemble.Y.topRows(k),
        ensemble.Y.bottomRows(ensemble.p - k - 1),
    };
}

} // namespace corrspec
