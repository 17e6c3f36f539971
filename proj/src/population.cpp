#include "corrspec/population.hpp"

#include <algorithm>
#include <cmath>

namespace corrspec {

namespace {

constexpr double kZeroThreshold = 1e-12;   // defines index sets from computed U
constexpr double kEigenClamp = -1e-10;     // rounding tolerance for psd checks

std::vector<std::vector<int>> index_sets_from_matrix(const Eigen::MatrixXd& U) {
    const int p = static_cast<int>(U.rows());
    std::vector<std::vector<int>> sets(p);
    for (int i = 0; i < p; ++i) {
        for (int k = 0; k < p; ++k) {
            if (std::abs(U(i, k)) > kZeroThreshold || std::abs(U(k, i)) > kZeroThreshold) {
                sets[i].push_back(k);
            }
        }
    }
    return sets;
}

Eigen::MatrixXd banded_toeplitz(int p, const std::vector<double>& coeffs) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(p, p);
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
        const auto offset = static_cast<int>(d) + 1;
        for (int i = 0; i + offset < p; ++i) {
            M(i, i + offset) = coeffs[d];
            M(i + offset, i) = coeffs[d];
        }
    }
    return M;
}

} // namespace

int PopulationModel::max_index_set_size() const {
    int m = 0;
    for (const auto& s : index_sets_) m = std::max(m, static_cast<int>(s.size()));
    return m;
}

Eigen::MatrixXd PopulationModel::rescaled_correlation() const {
    if (mode_ != PopulationMode::GivenU) return T_;
    Eigen::VectorXd d = T_.diagonal().array().rsqrt();
    return d.asDiagonal() * T_ * d.asDiagonal();
}

PopulationModel build_identity(int p) {
    if (p < 1) throw std::invalid_argument("build_identity: p must be >= 1");
    PopulationModel m;
    m.p_ = p;
    m.mode_ = PopulationMode::Identity;
    m.T_ = Eigen::MatrixXd::Identity(p, p);
    m.U_ = m.T_;
    m.index_sets_.resize(p);
    for (int i = 0; i < p; ++i) m.index_sets_[i] = {i};
    return m;
}

PopulationModel build_banded_toeplitz(int p, const std::vector<double>& coeffs) {
    if (p < 1) throw std::invalid_argument("build_banded_toeplitz: p must be >= 1");
    if (static_cast<int>(coeffs.size()) >= p) {
        throw std::invalid_argument("build_banded_toeplitz: bandwidth must be < p");
    }
    PopulationModel m;
    m.p_ = p;
    m.mode_ = PopulationMode::GivenT;
    m.coeffs_ = coeffs;
    m.T_ = banded_toeplitz(p, coeffs);
    m.U_ = hermitian_sqrt(m.T_); // throws NotPsdError naming the bad eigenvalue
    m.index_sets_ = index_sets_from_matrix(m.U_);
    return m;
}

PopulationModel build_from_sparse_root(int p, const std::vector<double>& root_coeffs) {
    if (p < 1) throw std::invalid_argument("build_from_sparse_root: p must be >= 1");
    if (static_cast<int>(root_coeffs.size()) >= p) {
        throw std::invalid_argument("build_from_sparse_root: bandwidth must be < p");
    }
    PopulationModel m;
    m.p_ = p;
    m.mode_ = PopulationMode::GivenU;
    m.coeffs_ = root_coeffs;
    m.U_ = banded_toeplitz(p, root_coeffs);
    m.T_ = m.U_ * m.U_.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.T_, Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min <= kZeroThreshold) {
        throw NotPsdError("build_from_sparse_root: U U^T is degenerate (lambda_min = " +
                          std::to_string(lambda_min) + ")");
    }

    const int bw = static_cast<int>(root_coeffs.size());
    m.index_sets_.resize(p);
    for (int i = 0; i < p; ++i) {
        for (int k = std::max(0, i - bw); k <= std::min(p - 1, i + bw); ++k) {
            m.index_sets_[i].push_back(k);
        }
    }
    return m;
}

Eigen::MatrixXd hermitian_sqrt(const Eigen::MatrixXd& T) {
    if (T.rows() != T.cols()) throw std::invalid_argument("hermitian_sqrt: matrix not square");
    if ((T - T.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("hermitian_sqrt: matrix not symmetric within 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXd lambda = es.eigenvalues();
    for (int i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < kEigenClamp) {
            throw NotPsdError("hermitian_sqrt: matrix not psd, smallest eigenvalue " +
                              std::to_string(lambda.minCoeff()));
        }
        lambda[i] = std::max(lambda[i], 0.0);
    }
    Eigen::MatrixXd U = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
                        es.eigenvectors().transpose();
    return 0.5 * (U + U.transpose());
}

AssumptionReport validate_assumptions(const PopulationModel& model,
                                      std::optional<double> /*gamma*/) {
    AssumptionReport report;
    const Eigen::MatrixXd that = model.rescaled_correlation();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(that, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues(); // ascending
    report.esd_T_summary.assign(ev.data(), ev.data() + ev.size());
    report.lambda_min_T = ev[0];
    report.max_index_set_size = model.max_index_set_size();
    report.psd_ok = ev[0] >= kEigenClamp;
    report.unit_diagonal_ok =
        (that.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12;
    return report;
}

DiscreteMeasure esd_of_T(const PopulationModel& model) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.rescaled_correlation(),
                                                      Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return DiscreteMeasure::uniform_on({ev.data(), ev.data() + ev.size()});
}

} // namespace corrspec
