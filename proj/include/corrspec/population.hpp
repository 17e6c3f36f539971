#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrspec/measure.hpp"

namespace corrspec {

enum class PopulationMode { Identity, GivenT, GivenU };

/// Raised when a requested population matrix is not positive semidefinite.
struct NotPsdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Population correlation structure: the correlation target T, a square-root
/// factor U with U U^T = T, and per-row index sets of the nonzero pattern of U.
///
/// Two dependent constructions are supported. GivenT takes a target T and
/// factors it (U is dense in general); GivenU builds a banded U directly, so
/// the index sets are small by construction. In GivenU mode diag(T) need not
/// be 1; downstream spectral summaries then use the rescaled target
/// D T D with D = diag(T)^{-1/2}, which is what row self-normalization sees.
class PopulationModel {
public:
    int dim() const noexcept { return p_; }
    PopulationMode mode() const noexcept { return mode_; }
    const Eigen::MatrixXd& correlation() const noexcept { return T_; }
    const Eigen::MatrixXd& sqrt_factor() const noexcept { return U_; }
    const std::vector<std::vector<int>>& index_sets() const noexcept { return index_sets_; }

    int max_index_set_size() const;

    /// T rescaled to unit diagonal (T itself in Identity/GivenT modes).
    Eigen::MatrixXd rescaled_correlation() const;

    /// Construction coefficients (band values), echoed into configs/manifests.
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

private:
    friend PopulationModel build_identity(int);
    friend PopulationModel build_banded_toeplitz(int, const std::vector<double>&);
    friend PopulationModel build_from_sparse_root(int, const std::vector<double>&);
    PopulationModel() = default;

    int p_ = 0;
    PopulationMode mode_ = PopulationMode::Identity;
    Eigen::MatrixXd T_, U_;
    std::vector<std::vector<int>> index_sets_;
    std::vector<double> coeffs_;
};

struct AssumptionReport {
    double lambda_min_T = 0.0;
    std::vector<double> esd_T_summary; // eigenvalues of the rescaled T, ascending
    int max_index_set_size = 0;
    bool unit_diagonal_ok = false;
    bool psd_ok = false;
};

/// T = U = I, index sets {i}.
PopulationModel build_identity(int p);

/// Unit-diagonal symmetric Toeplitz target with entries coeffs[d-1] on the
/// d-th sub/superdiagonal; U is the Hermitian square root.
PopulationModel build_banded_toeplitz(int p, const std::vector<double>& coeffs);

/// Banded symmetric Toeplitz square root U (unit diagonal, root_coeffs off the
/// diagonal); T = U U^T. Keeps every index set within the band exactly.
PopulationModel build_from_sparse_root(int p, const std::vector<double>& root_coeffs);

/// Symmetric psd square root via full eigendecomposition; eigenvalues in
/// [-1e-10, 0) are clamped to 0, anything lower raises NotPsdError.
Eigen::MatrixXd hermitian_sqrt(const Eigen::MatrixXd& T);

/// Reporting only; never mutates the model. `gamma` is accepted for symmetry
/// with the harness call sites and echoed nowhere in the report itself.
AssumptionReport validate_assumptions(const PopulationModel& model,
                                      std::optional<double> gamma = std::nullopt);

/// ESD of the (rescaled) population target: equal-weight atoms, ascending.
DiscreteMeasure esd_of_T(const PopulationModel& model);

} // namespace corrspec
