#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "corrspec/distributions.hpp"

using namespace corrspec;

namespace {

double mean_of(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    return m / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return v / static_cast<double>(xs.size() - 1);
}

double kurtosis_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double v = 0.0, q = 0.0;
    for (double x : xs) {
        const double d = x - m;
        v += d * d;
        q += d * d * d * d;
    }
    v /= static_cast<double>(xs.size());
    q /= static_cast<double>(xs.size());
    return q / (v * v);
}

} // namespace

TEST_SUITE("distributions") {

TEST_CASE("gaussian draws are standardized") {
    const auto xs = sample(DistributionSpec::gaussian(), 1'000'000, 20240801);
    CHECK(std::abs(mean_of(xs)) < 0.01);
    CHECK(std::abs(variance_of(xs) - 1.0) < 0.01);
}

TEST_CASE("student t(3) variance is 1 within pilot tolerance") {
    const auto xs = sample(DistributionSpec::student_t(3.0), 1'000'000, 20240802);
    CHECK(std::abs(variance_of(xs) - 1.0) < 0.05);

    // The fourth moment does not exist: the sample kurtosis keeps growing.
    const std::vector<double> head(xs.begin(), xs.begin() + 10'000);
    CHECK(kurtosis_of(xs) > kurtosis_of(head));
    CHECK(kurtosis_of(xs) > 10.0);
}

TEST_CASE("symmetrized pareto is symmetric") {
    const auto xs = sample(DistributionSpec::symmetrized_pareto(1.0), 100'000, 7);

    // Support excludes (-1, 1), so the sample median can sit anywhere in the
    // central gap; symmetry pins it to [-1, 1] and balances the signs.
    std::vector<double> sorted(xs);
    std::sort(sorted.begin(), sorted.end());
    const double median =
        0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    CHECK(std::abs(median) <= 1.05);

    const auto positives = static_cast<double>(
        std::count_if(xs.begin(), xs.end(), [](double x) { return x > 0.0; }));
    const double n = static_cast<double>(xs.size());
    CHECK(std::abs(positives / n - 0.5) < 3.0 * 0.5 / std::sqrt(n));

    for (double x : xs) CHECK(std::abs(x) >= 1.0);
}

TEST_CASE("centered exponential is standardized") {
    const auto xs = sample(DistributionSpec::centered_exponential(), 1'000'000, 99);
    CHECK(std::abs(mean_of(xs)) < 0.01);
    CHECK(std::abs(variance_of(xs) - 1.0) < 0.01);
    for (double x : xs) CHECK(x >= -1.0);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(DistributionSpec::student_t(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::student_t(-3.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::student_t(2.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::symmetrized_pareto(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::symmetrized_pareto(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample(DistributionSpec::gaussian(), 0, 1), std::invalid_argument);
}

TEST_CASE("metadata flags") {
    CHECK(DistributionSpec::gaussian().is_symmetric());
    CHECK(DistributionSpec::student_t(3.0).is_symmetric());
    CHECK(DistributionSpec::symmetrized_pareto(1.5).is_symmetric());
    CHECK_FALSE(DistributionSpec::centered_exponential().is_symmetric());

    CHECK(DistributionSpec::gaussian().has_finite_variance());
    CHECK_FALSE(DistributionSpec::symmetrized_pareto(1.0).has_finite_variance());
    CHECK(DistributionSpec::symmetrized_pareto(2.5).has_finite_variance());

    CHECK(DistributionSpec::symmetrized_pareto(1.5).tail_index() == 1.5);
    CHECK(DistributionSpec::student_t(3.0).tail_index() == 3.0);
    CHECK_FALSE(DistributionSpec::gaussian().tail_index().has_value());
}

TEST_CASE("identical seeds reproduce bit-identical samples") {
    for (const auto& spec :
         {DistributionSpec::gaussian(), DistributionSpec::student_t(3.0),
          DistributionSpec::symmetrized_pareto(1.0),
          DistributionSpec::centered_exponential()}) {
        const auto a = sample(spec, 4096, 1234);
        const auto b = sample(spec, 4096, 1234);
        CHECK(a == b);
        const auto c = sample(spec, 4096, 1235);
        CHECK(a != c);
    }
}

TEST_CASE("stream keys separate replicates") {
    const auto k1 = derive_stream_key(42, 0, 0);
    const auto k2 = derive_stream_key(42, 0, 1);
    const auto k3 = derive_stream_key(42, 1, 0);
    CHECK(k1 != k2);
    CHECK(k1 != k3);
    CHECK(k2 != k3);
}

} // TEST_SUITE
