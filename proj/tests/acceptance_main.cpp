// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Run with --list to see criteria, --only <k> (repeatable) to run a subset.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corrspec/diagnostics.hpp"
#include "corrspec/ensemble.hpp"
#include "corrspec/experiments.hpp"
#include "corrspec/limit_laws.hpp"
#include "corrspec/rng.hpp"
#include "corrspec/spectra.hpp"

using namespace corrspec;
using complexd = std::complex<double>;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << (detail.str().empty() ? "" : "; ") << "FAILED: " << what;
        }
    }
    void note(const std::string& what) {
        detail << (detail.str().empty() ? "" : "; ") << what;
    }
};

std::vector<complexd> contract_z_grid() {
    std::vector<complexd> zs;
    for (double re : {-1.0, -0.3, 0.5, 1.5, 3.0}) {
        for (double im : {0.1, 0.5, 1.0, 2.0}) zs.emplace_back(re, im);
    }
    return zs;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

Outcome exact_algebra() {
    Outcome out;
    const PopulationModel banded = build_banded_toeplitz(50, {0.5, 0.25});
    const SampleEnsemble a = generate(banded, DistributionSpec::gaussian(), 80, 20240);
    const SampleEnsemble b =
        generate(build_identity(30), DistributionSpec::student_t(3.0), 20, 20241);

    double worst_norm = 0.0, worst_diag = 0.0, worst_row_identity = 0.0;
    for (const SampleEnsemble* ens : {&a, &b}) {
        for (int k = 0; k < ens->p; ++k) {
            worst_norm = std::max(worst_norm, std::abs(ens->Y.row(k).norm() - 1.0));
            worst_diag = std::max(worst_diag, std::abs(ens->R(k, k) - 1.0));
            const double sum4 = ens->Y.row(k).array().pow(4).sum();
            const double sum2 = ens->Y.row(k).array().square().sum();
            worst_row_identity = std::max(
                worst_row_identity, std::abs((sum2 * sum2 - sum4) - (1.0 - sum4)));
        }
    }
    out.require(worst_norm <= 1e-12, "row norms within 1e-12 (got " + fmt(worst_norm) + ")");
    out.require(worst_diag <= 1e-12, "diag(R) within 1e-12 (got " + fmt(worst_diag) + ")");
    out.require(worst_row_identity <= 1e-12,
                "per-row square identity within 1e-12 (got " + fmt(worst_row_identity) + ")");

    const double companion = std::max(companion_eigen_check(a), companion_eigen_check(b));
    out.require(companion <= 1e-8,
                "companion eigenvalues within 1e-8 (got " + fmt(companion) + ")");

    Eigen::MatrixXd scaled = a.X;
    scaled.row(7) *= 123.456;
    scaled.row(31) *= 1e-6;
    const double scale_gap = (self_normalize_rows(scaled) - a.Y).cwiseAbs().maxCoeff();
    out.require(scale_gap <= 1e-12,
                "row-rescaling invariance within 1e-12 (got " + fmt(scale_gap) + ")");
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome mp_stieltjes_contract() {
    Outcome out;
    double worst_quad = 0.0, worst_smp = 0.0;
    for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
        for (const complexd z : contract_z_grid()) {
            const complexd s = mp_stieltjes(gamma, z);
            worst_quad = std::max(
                worst_quad, std::abs(gamma * z * s * s + (z + gamma - 1.0) * s + 1.0));
            worst_smp = std::max(
                worst_smp, std::abs(-z * s - 1.0 / (1.0 + gamma * s - (1.0 - gamma) / z)));
        }
    }
    out.require(worst_quad <= 1e-12, "quadratic residual <= 1e-12 (got " + fmt(worst_quad) + ")");
    out.require(worst_smp <= 1e-10, "fixed-point residual <= 1e-10 (got " + fmt(worst_smp) + ")");
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome oracle_equivalence() {
    Outcome out;
    const DiscreteMeasure h1 = DiscreteMeasure::point_mass(1.0);
    double worst_s = 0.0;
    for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
        for (const complexd z : contract_z_grid()) {
            worst_s = std::max(worst_s,
                               std::abs(solve_lsd(gamma, h1, z).s - mp_stieltjes(gamma, z)));
        }
    }
    out.require(worst_s <= 1e-8, "solve_lsd vs mp_stieltjes <= 1e-8 (got " + fmt(worst_s) + ")");

    std::vector<double> grid;
    for (int i = 0; i < 33; ++i) grid.push_back(0.05 + (3.2 - 0.05) * i / 32.0);
    const LsdSolution solution = lsd_density_on_grid(0.5, h1, grid, 1e-3);
    double worst_density = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst_density =
            std::max(worst_density, std::abs(solution.density[i] - mp_density(0.5, grid[i])));
    }
    out.require(worst_density <= 0.01,
                "inverted density within 0.01 of closed form (got " + fmt(worst_density) + ")");
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome laplace_oracle() {
    Outcome out;
    const LaplaceProfile gaussian = laplace_profile(DistributionSpec::gaussian());
    for (int n : {4, 50, 256}) {
        const double value = laplace_fourth_moment(gaussian, n).value;
        const double oracle = 3.0 / (static_cast<double>(n) * (n + 2.0));
        out.require(std::abs(value - oracle) <= 1e-10,
                    "Gaussian Laplace integral at n=" + std::to_string(n) + " (gap " +
                        fmt(std::abs(value - oracle)) + ")");
    }
    for (int n : {50, 256}) {
        const MomentReport mc = moment_estimates(build_identity(40),
                                                 DistributionSpec::gaussian(), n, 30, 4040);
        const double quad = n * laplace_fourth_moment(gaussian, n).value;
        out.require(std::abs(mc.n_E_Y4.value - quad) <= 3.0 * mc.n_E_Y4.std_error,
                    "Monte Carlo agreement at n=" + std::to_string(n) + " (gap " +
                        fmt(std::abs(mc.n_E_Y4.value - quad)) + ", 3se " +
                        fmt(3.0 * mc.n_E_Y4.std_error) + ")");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome iid_regime_ks() {
    Outcome out;
    const auto mp_half_cdf = [](double x) { return mp_cdf(0.5, x); };
    const PopulationModel model = build_identity(1000);
    int idx = 0;
    for (const auto& spec : {DistributionSpec::gaussian(), DistributionSpec::student_t(3.0)}) {
        const SampleEnsemble ens = generate(model, spec, 2000, 555000 + idx++);
        const EmpiricalSpectrum spectrum = symmetric_eigenvalues(ens.R);
        const double ks = ks_distance(spectrum, mp_half_cdf);
        out.note(spec.name() + " KS " + fmt(ks));
        out.require(ks <= 0.05, spec.name() + " KS <= 0.05");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome stable_domain_moments() {
    Outcome out;
    struct Case {
        double alpha;
        double limit;
    };
    for (const Case c : {Case{1.0, 0.5}, Case{1.5, 0.25}}) {
        // 20 replicates x 100 identity-model rows = 2000 replicate rows.
        const MomentReport report =
            moment_estimates(build_identity(100), DistributionSpec::symmetrized_pareto(c.alpha),
                             4096, 20, 606060);
        const double gap = std::abs(report.n_E_Y4.value - c.limit);
        out.note("alpha=" + fmt(c.alpha) + " estimate " + fmt(report.n_E_Y4.value));
        out.require(gap <= 0.05, "alpha=" + fmt(c.alpha) + " within 0.05 of " + fmt(c.limit) +
                                     " (gap " + fmt(gap) + ")");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome w_bound() {
    Outcome out;
    const complexd z(0.0, 1.0);
    double worst_abs = 0.0, worst_decomp = 0.0;
    int checked = 0;
    for (int r = 0; r < 50; ++r) {
        for (const auto& shape : {std::pair<int, int>{100, 200}, {250, 200}}) {
            const SampleEnsemble ens =
                generate(build_identity(shape.first), DistributionSpec::student_t(3.0),
                         shape.second, derive_stream_key(777000, shape.first, r));
            const ResolventDiagnostics w = compute_w(ens, z);
            worst_abs = std::max(worst_abs, std::abs(w.w_n));
            worst_decomp = std::max(worst_decomp, std::abs(w.w_n - (w.w_n1 + w.w_n2)));
            ++checked;
        }
    }
    out.note(std::to_string(checked) + " ensembles, max |W| " + fmt(worst_abs));
    out.require(worst_abs <= 2.0, "|W_n(i)| <= 2 on all ensembles");
    out.require(worst_decomp <= 1e-10,
                "W = W1 + W2 within 1e-10 (got " + fmt(worst_decomp) + ")");
    return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome master_equation_trend() {
    Outcome out;
    const complexd z(0.0, 1.0);
    int seed_base = 818181;
    for (const auto& spec : {DistributionSpec::gaussian(), DistributionSpec::student_t(3.0)}) {
        const ComplexWithError small = master_equation_residual(
            build_identity(100), spec, 200, z, 200, seed_base);
        const ComplexWithError large = master_equation_residual(
            build_identity(200), spec, 400, z, 200, seed_base + 1);
        seed_base += 1000;
        const double joint_se = 2.0 * std::sqrt(small.std_error * small.std_error +
                                                large.std_error * large.std_error);
        out.note(spec.name() + ": |res(100,200)| " + fmt(std::abs(small.value)) +
                 ", |res(200,400)| " + fmt(std::abs(large.value)) + ", 2 joint se " +
                 fmt(joint_se));
        out.require(std::abs(large.value) <= std::abs(small.value) + joint_se,
                    spec.name() + " residual magnitude non-increasing within noise");
    }
    return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome figure_one_reproduction() {
    Outcome out;
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::Qq;
    cfg.seed = 909090;
    cfg.replicates = 50;
    cfg.model.mode = "banded_toeplitz";
    cfg.model.coeffs = {0.5, 0.25};
    cfg.distributions = {DistributionSpec::gaussian(), DistributionSpec::student_t(3.0)};
    cfg.sizes = {{100, 200}, {400, 800}};
    cfg.q_list = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    const QQReport report = qq_experiment(cfg);

    const QqSizeReport& big = report.sizes[1];
    double max_gap_to_09 = 0.0;
    for (const QqCell& cell : big.cells) {
        if (cell.q <= 0.9) max_gap_to_09 = std::max(max_gap_to_09, cell.gap());
    }
    out.note("(400,800) max gap q<=0.9: " + fmt(max_gap_to_09));
    out.require(max_gap_to_09 <= 0.1, "(400,800) max mean-quantile gap <= 0.1");

    const QqSizeReport& small = report.sizes[0];
    std::vector<double> gaps;
    double gap95 = 0.0;
    for (const QqCell& cell : small.cells) {
        if (cell.q <= 0.9) {
            gaps.push_back(cell.gap());
        } else {
            gap95 = cell.gap();
        }
    }
    std::sort(gaps.begin(), gaps.end());
    const double median = gaps[gaps.size() / 2];
    out.note("(100,200) gap(0.95) " + fmt(gap95) + " vs median " + fmt(median));
    out.require(gap95 > median, "q=0.95 gap exceeds the median of the q<=0.9 gaps");
    return out;
}

// --------------------------------------------------------------- criterion 10

Outcome dependent_lsd_ks() {
    Outcome out;
    const PopulationModel model = build_banded_toeplitz(400, {0.5, 0.25});
    const SampleEnsemble ens = generate(model, DistributionSpec::gaussian(), 800, 101010);
    const EmpiricalSpectrum spectrum = symmetric_eigenvalues(ens.R);

    const DiscreteMeasure h = esd_of_T(model);
    std::vector<double> grid;
    for (int i = 0; i < 750; ++i) grid.push_back(1e-3 + (7.8 - 1e-3) * i / 749.0);
    const LsdSolution solution = lsd_density_on_grid(0.5, h, grid, 1e-3);
    const double ks =
        ks_distance(spectrum, [&](double x) { return lsd_cdf(solution, x); });
    out.note("KS " + fmt(ks));
    out.require(ks <= 0.07, "ESD vs generalized-law CDF KS <= 0.07");
    return out;
}

// --------------------------------------------------------------- criterion 11

Outcome sparse_root_moment_propositions() {
    Outcome out;
    const PopulationModel model = build_from_sparse_root(50, {0.3});
    const MomentReport at64 =
        moment_estimates(model, DistributionSpec::gaussian(), 64, 40, 111213);
    const MomentReport at256 =
        moment_estimates(model, DistributionSpec::gaussian(), 256, 40, 111214);

    out.note("n max_k |E[Y_k1]|: " + fmt(at64.n_max_first_moment.value) + " (se " +
             fmt(at64.n_max_first_moment.std_error) + ")");
    out.require(at64.n_max_first_moment.value <= 3.0 * at64.n_max_first_moment.std_error,
                "first-moment maximum within 3 se of 0 at n=64");
    out.require(
        at256.n_max_first_moment.value <= 3.0 * at256.n_max_first_moment.std_error,
        "first-moment maximum within 3 se of 0 at n=256");

    out.note("n E[Y^4]: " + fmt(at64.n_E_Y4.value) + " -> " + fmt(at256.n_E_Y4.value));
    out.require(at256.n_E_Y4.value < at64.n_E_Y4.value,
                "n E[Y_11^4] decreases from n=64 to n=256");
    return out;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "exact-algebra", exact_algebra},
        {2, "mp-stieltjes-contract", mp_stieltjes_contract},
        {3, "oracle-equivalence", oracle_equivalence},
        {4, "laplace-oracle", laplace_oracle},
        {5, "iid-regime-ks", iid_regime_ks},
        {6, "stable-domain-moments", stable_domain_moments},
        {7, "w-bound", w_bound},
        {8, "master-equation-trend", master_equation_trend},
        {9, "figure-one-reproduction", figure_one_reproduction},
        {10, "dependent-lsd-ks", dependent_lsd_ks},
        {11, "sparse-root-moments", sparse_root_moment_propositions},
    };

    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--list") == 0) {
            for (const auto& c : criteria) {
                std::cout << c.id << " " << c.name << "\n";
            }
            return 0;
        }
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only.insert(std::atoi(argv[++i]));
            continue;
        }
    }

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << "exception: " << e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " C" << c.id << " " << c.name;
        if (!outcome.detail.str().empty()) std::cout << " — " << outcome.detail.str();
        std::cout << " (" << fmt(seconds) << " s)" << std::endl;
        if (!outcome.pass) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
