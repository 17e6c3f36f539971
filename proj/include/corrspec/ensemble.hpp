#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "corrspec/distributions.hpp"
#include "corrspec/population.hpp"

namespace corrspec {

/// A row of X turned out to be identically zero; cannot self-normalize.
struct DegenerateSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One realization of the data model:
///   X = U * Xtilde,      S = X X^T / n,
///   R = M S M with M = diag(S)^{-1/2},
///   Y = n^{-1/2} M X     (rows of Y have unit Euclidean norm, R = Y Y^T).
struct SampleEnsemble {
    int p = 0;
    int n = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd Xtilde;
    Eigen::MatrixXd X;
    Eigen::MatrixXd S;
    Eigen::MatrixXd R;
    Eigen::MatrixXd Y;
};

/// Deterministic given (model, spec, n, seed). Xtilde is filled column by
/// column from the stream, so two runs with the same inputs agree bit for bit.
SampleEnsemble generate(const PopulationModel& model, const DistributionSpec& spec,
                        int n, std::uint64_t seed);

/// Rows of X divided by their Euclidean norms (the map X -> Y).
Eigen::MatrixXd self_normalize_rows(const Eigen::MatrixXd& X);

/// Max absolute gap between the matched (descending) eigenvalues of R and of
/// Y^T Y; the two share their nonzero spectrum, so this should be ~1e-8 or less.
double companion_eigen_check(const SampleEnsemble& ensemble);

/// Read-only view of row k of Y next to the remaining rows (two blocks).
struct RowRemovedView {
    Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row;
    Eigen::Ref<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> above; ///< rows [0, k)
    Eigen::Ref<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> below; ///< rows (k, p)
};

/// k is 0-based; throws std::out_of_range otherwise. No data is copied.
RowRemovedView remove_row_view(const SampleEnsemble& ensemble, int k);

} // namespace corrspec
