#include <doctest.h>

#include <cmath>

#include "corrspec/ensemble.hpp"
#include "corrspec/rng.hpp"
#include "corrspec/spectra.hpp"

using namespace corrspec;

namespace {

void check_core_identities(const SampleEnsemble& ens) {
    for (int k = 0; k < ens.p; ++k) {
        CHECK(std::abs(ens.Y.row(k).norm() - 1.0) <= 1e-12);
        CHECK(std::abs(ens.R(k, k) - 1.0) <= 1e-12);

        // (sum_j Y_kj^2)^2 = 1 forces sum_{i!=j} Y_ki^2 Y_kj^2 = 1 - sum Y_ki^4.
        const double sum4 = ens.Y.row(k).array().pow(4).sum();
        const double sum2 = ens.Y.row(k).array().square().sum();
        const double off = sum2 * sum2 - sum4;
        CHECK(std::abs(off - (1.0 - sum4)) <= 1e-12);
    }
    CHECK((ens.R - ens.Y * ens.Y.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
}

} // namespace

TEST_SUITE("ensemble") {

TEST_CASE("tiny ensembles") {
    const SampleEnsemble ens =
        generate(build_identity(2), DistributionSpec::gaussian(), 2, 11);
    CHECK(ens.R.rows() == 2);
    CHECK(ens.R(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ens.R(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ens.R(0, 1)) <= 1.0 + 1e-12);

    const SampleEnsemble single =
        generate(build_identity(1), DistributionSpec::student_t(3.0), 7, 13);
    CHECK(single.R(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("construction identities hold across models and laws") {
    const PopulationModel banded = build_banded_toeplitz(50, {0.5, 0.25});
    const PopulationModel sparse = build_from_sparse_root(50, {0.3});
    const PopulationModel identity = build_identity(50);
    int seed = 100;
    for (const auto* model : {&identity, &banded, &sparse}) {
        for (const auto& spec :
             {DistributionSpec::gaussian(), DistributionSpec::student_t(3.0),
              DistributionSpec::symmetrized_pareto(1.0),
              DistributionSpec::centered_exponential()}) {
            check_core_identities(generate(*model, spec, 80, seed++));
        }
    }
}

TEST_CASE("trace of R equals p") {
    const SampleEnsemble ens =
        generate(build_identity(100), DistributionSpec::gaussian(), 200, 17);
    CHECK(ens.R.trace() / 100.0 == doctest::Approx(1.0).epsilon(1e-10));

    const EmpiricalSpectrum spectrum = symmetric_eigenvalues(ens.R);
    double mean = 0.0;
    for (double ev : spectrum.eigenvalues()) {
        CHECK(ev >= -1e-10);
        CHECK(ev <= 100.0 + 1e-8);
        mean += ev;
    }
    CHECK(mean / 100.0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("companion spectra share nonzero eigenvalues") {
    const SampleEnsemble wide =
        generate(build_banded_toeplitz(40, {0.5, 0.25}), DistributionSpec::gaussian(), 60, 5);
    CHECK(companion_eigen_check(wide) <= 1e-8);

    const SampleEnsemble tall =
        generate(build_identity(30), DistributionSpec::gaussian(), 20, 6);
    CHECK(companion_eigen_check(tall) <= 1e-8);
    const EmpiricalSpectrum spectrum = symmetric_eigenvalues(tall.R);
    int zeros = 0;
    for (double ev : spectrum.eigenvalues()) {
        if (std::abs(ev) <= 1e-8) ++zeros;
    }
    CHECK(zeros >= 10); // rank(R) <= n

    const SampleEnsemble single =
        generate(build_identity(1), DistributionSpec::gaussian(), 5, 7);
    CHECK(companion_eigen_check(single) <= 1e-12);
}

TEST_CASE("remove_row_view exposes unit-norm rows without copying") {
    const SampleEnsemble ens =
        generate(build_identity(4), DistributionSpec::gaussian(), 9, 21);

    const RowRemovedView v = remove_row_view(ens, 2);
    CHECK(std::abs(v.row.norm() - 1.0) <= 1e-12);
    CHECK(v.above.rows() == 2);
    CHECK(v.below.rows() == 1);
    CHECK(v.row.data() == ens.Y.row(2).data()); // a view, not a copy

    Eigen::MatrixXd stacked(4, 9);
    stacked.topRows(2) = v.above;
    stacked.row(2) = v.row;
    stacked.bottomRows(1) = v.below;
    CHECK((stacked - ens.Y).cwiseAbs().maxCoeff() == 0.0);

    const RowRemovedView first = remove_row_view(ens, 0);
    CHECK(first.above.rows() == 0);
    CHECK(first.below.rows() == 3);

    CHECK_THROWS_AS(remove_row_view(ens, -1), std::out_of_range);
    CHECK_THROWS_AS(remove_row_view(ens, 4), std::out_of_range);
}

TEST_CASE("self-normalization is scale invariant per row") {
    const SampleEnsemble ens =
        generate(build_banded_toeplitz(20, {0.5, 0.25}), DistributionSpec::student_t(3.0),
                 40, 33);
    Eigen::MatrixXd scaled = ens.X;
    scaled.row(3) *= 17.5;
    scaled.row(11) *= 3e-7;
    const Eigen::MatrixXd y_scaled = self_normalize_rows(scaled);
    CHECK((y_scaled - ens.Y).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("generation is deterministic in the seed") {
    const PopulationModel model = build_identity(8);
    const auto spec = DistributionSpec::centered_exponential();
    const SampleEnsemble a = generate(model, spec, 16, 555);
    const SampleEnsemble b = generate(model, spec, 16, 555);
    CHECK((a.Xtilde - b.Xtilde).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.R - b.R).cwiseAbs().maxCoeff() == 0.0);
    const SampleEnsemble c = generate(model, spec, 16, 556);
    CHECK((a.Xtilde - c.Xtilde).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("n below 2 is rejected") {
    CHECK_THROWS_AS(generate(build_identity(3), DistributionSpec::gaussian(), 1, 1),
                    std::invalid_argument);
}

TEST_CASE("smallest covariance eigenvalue approaches the lower MP edge") {
    // gamma = 200/800 = 1/4, lower edge (1 - 1/2)^2 = 1/4.
    const int p = 200, n = 800;
    int hits = 0;
    for (int r = 0; r < 50; ++r) {
        RngStream stream(derive_stream_key(909, 0, r));
        Eigen::MatrixXd x(p, n);
        const auto spec = DistributionSpec::gaussian();
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < p; ++i) x(i, j) = spec.draw(stream);
        }
        const Eigen::MatrixXd s = x * x.transpose() / n;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
        if (std::abs(es.eigenvalues()[0] - 0.25) < 0.1) ++hits;
    }
    CHECK(hits >= 45);
}

} // TEST_SUITE
