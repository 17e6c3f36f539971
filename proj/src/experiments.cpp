#include "corrspec/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "corrspec/ensemble.hpp"
#include "corrspec/parallel.hpp"
#include "corrspec/rng.hpp"
#include "corrspec/spectra.hpp"

namespace corrspec {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string size_tag(const SizePair& s) {
    return std::to_string(s.p) + "x" + std::to_string(s.n);
}

ValueWithError mean_and_se(const std::vector<double>& xs) {
    const auto r = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= r;
    if (xs.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (r - 1.0);
    return {mean, std::sqrt(var / r)};
}

// Theoretical quantiles of the limit law for a model at aspect ratio p/n.
std::vector<double> lsd_reference_quantiles(const PopulationModel& model, int p, int n,
                                            const std::vector<double>& q_list,
                                            const ExperimentConfig& cfg) {
    const double gamma = static_cast<double>(p) / n;
    const DiscreteMeasure H = model.mode() == PopulationMode::Identity
                                  ? DiscreteMeasure::point_mass(1.0)
                                  : esd_of_T(model);
    double lambda_max = 0.0;
    for (double a : H.atoms) lambda_max = std::max(lambda_max, a);
    const double upper = lambda_max * (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma));
    // Above gamma = 1 a point mass sits at 0 and makes the fixed point
    // repelling for x near 0, so the grid starts above that region; the mass
    // there is covered by zero_mass, not by the density sweep.
    const double lower = gamma > 1.0 ? 0.02 : 5e-4;
    std::vector<double> grid;
    const int points = 800;
    for (int i = 0; i < points; ++i) {
        grid.push_back(lower + (1.02 * upper - lower) * i / (points - 1));
    }
    LsdOptions opts{cfg.lsd_damping, cfg.lsd_tol, cfg.lsd_max_iter};
    const LsdSolution solution = lsd_density_on_grid(gamma, H, grid, cfg.epsilon, opts);
    return lsd_quantiles(solution, q_list);
}

std::string csv_two_columns(const std::string& header, const std::vector<double>& a,
                            const std::vector<double>& b) {
    std::string out = header + "\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += fmt(a[i]) + "," + fmt(b[i]) + "\n";
    }
    return out;
}

std::string indexed_csv(const std::vector<double>& values) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i) + "," + fmt(values[i]) + "\n";
    }
    return out;
}

// ----------------------------------------------------------------- simulate

std::vector<OutputFile> render_simulate(const ExperimentConfig& cfg) {
    std::vector<OutputFile> files;
    int combo = 0;
    for (const auto& size : cfg.sizes) {
        const PopulationModel model = cfg.model.build(size.p);
        for (const auto& dist : cfg.distributions) {
            const SampleEnsemble ens =
                generate(model, dist, size.n, derive_stream_key(cfg.seed, combo, 0));
            const EmpiricalSpectrum spectrum = symmetric_eigenvalues(ens.R);
            files.push_back({"simulate_eigs_" + size_tag(size) + "_" + dist.name() + ".csv",
                             indexed_csv(spectrum.eigenvalues())});

            std::vector<double> row_moments(ens.p);
            for (int k = 0; k < ens.p; ++k) {
                row_moments[k] = ens.Y.row(k).array().pow(4).sum();
            }
            files.push_back({"simulate_rowmoment4_" + size_tag(size) + "_" + dist.name() +
                                 ".csv",
                             indexed_csv(row_moments)});

            std::vector<double> qs = cfg.q_list;
            if (qs.empty()) {
                for (int i = 1; i <= 19; ++i) qs.push_back(0.05 * i);
            }
            files.push_back({"simulate_quantiles_" + size_tag(size) + "_" + dist.name() +
                                 ".csv",
                             quantile_table_csv(spectrum, qs)});
            ++combo;
        }
    }
    return files;
}

// ----------------------------------------------------------------------- mp

std::vector<OutputFile> render_mp(const ExperimentConfig& cfg) {
    const double gamma = *cfg.gamma;
    const MpLaw law(gamma);
    std::vector<double> grid;
    if (cfg.x_grid) {
        grid = cfg.x_grid->materialize();
    } else {
        const int points = 400;
        for (int i = 0; i < points; ++i) {
            grid.push_back(law.a + (law.b - law.a) * i / (points - 1));
        }
    }
    std::vector<double> density, cdf;
    for (double x : grid) {
        density.push_back(mp_density(gamma, x));
        cdf.push_back(mp_cdf(gamma, x));
    }
    std::vector<double> qs = cfg.q_list;
    if (qs.empty()) {
        for (int i = 1; i <= 19; ++i) qs.push_back(0.05 * i);
    }
    std::vector<double> quantiles;
    for (double q : qs) quantiles.push_back(mp_quantile(gamma, q));

    const std::string tag = fmt_short(gamma);
    return {
        {"mp_" + tag + "_density.csv", csv_two_columns("x,density", grid, density)},
        {"mp_" + tag + "_cdf.csv", csv_two_columns("x,cdf", grid, cdf)},
        {"mp_" + tag + "_quantiles.csv", csv_two_columns("q,quantile", qs, quantiles)},
    };
}

// ---------------------------------------------------------------------- lsd

std::vector<OutputFile> render_lsd(const ExperimentConfig& cfg) {
    const SizePair size = cfg.sizes.front();
    const PopulationModel model = cfg.model.build(size.p);
    const double gamma = cfg.gamma.value_or(static_cast<double>(size.p) / size.n);
    const DiscreteMeasure H = model.mode() == PopulationMode::Identity
                                  ? DiscreteMeasure::point_mass(1.0)
                                  : esd_of_T(model);

    std::vector<double> grid;
    if (cfg.x_grid) {
        grid = cfg.x_grid->materialize();
    } else {
        double lambda_max = 0.0;
        for (double a : H.atoms) lambda_max = std::max(lambda_max, a);
        const double upper =
            1.02 * lambda_max * (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma));
        const double lower = gamma > 1.0 ? 0.02 : 5e-4; // clear of the zero atom
        for (int i = 0; i < 400; ++i) grid.push_back(lower + (upper - lower) * i / 399.0);
    }

    LsdOptions opts{cfg.lsd_damping, cfg.lsd_tol, cfg.lsd_max_iter};
    const LsdSolution solution = lsd_density_on_grid(gamma, H, grid, cfg.epsilon, opts);

    std::vector<double> cdf;
    for (double x : grid) cdf.push_back(lsd_cdf(solution, x));
    std::vector<double> qs = cfg.q_list;
    if (qs.empty()) {
        for (int i = 1; i <= 19; ++i) qs.push_back(0.05 * i);
    }
    const std::vector<double> quantiles = lsd_quantiles(solution, qs);

    int max_iterations = 0;
    double max_residual = 0.0;
    long long total_iterations = 0;
    for (std::size_t i = 0; i < solution.iterations.size(); ++i) {
        max_iterations = std::max(max_iterations, solution.iterations[i]);
        max_residual = std::max(max_residual, solution.residuals[i]);
        total_iterations += solution.iterations[i];
    }
    json convergence = {
        {"gamma", gamma},
        {"epsilon", cfg.epsilon},
        {"grid_points", grid.size()},
        {"zero_mass", solution.zero_mass},
        {"zero_mass_flagged", solution.zero_mass_flagged},
        {"max_iterations", max_iterations},
        {"mean_iterations",
         static_cast<double>(total_iterations) / static_cast<double>(grid.size())},
        {"max_residual", max_residual},
    };

    const std::string tag = size_tag(size);
    return {
        {"lsd_" + tag + "_density.csv", csv_two_columns("x,density", grid, solution.density)},
        {"lsd_" + tag + "_cdf.csv", csv_two_columns("x,cdf", grid, cdf)},
        {"lsd_" + tag + "_quantiles.csv", csv_two_columns("q,quantile", qs, quantiles)},
        {"lsd_" + tag + "_convergence.json", convergence.dump(2) + "\n"},
    };
}

// ----------------------------------------------------------------- diagnose

std::vector<OutputFile> render_diagnose(const ExperimentConfig& cfg) {
    std::vector<OutputFile> files;
    int combo = 0;
    for (const auto& size : cfg.sizes) {
        const PopulationModel model = cfg.model.build(size.p);
        for (const auto& dist : cfg.distributions) {
            const int reps = cfg.replicates;
            std::vector<SampleEnsemble> ensembles(reps);
            parallel_for(reps, cfg.threads, [&](int r) {
                ensembles[r] = generate(model, dist, size.n,
                                        derive_stream_key(cfg.seed, combo, r));
            });

            json z_reports = json::array();
            std::string csv = "z_re,z_im,mean_re_w,mean_im_w,se_abs_w,max_decomp_residual,"
                              "bound_violations,master_re,master_im,master_se\n";
            for (const auto& z : cfg.z_grid) {
                std::vector<double> re(reps), im(reps), mag(reps);
                double max_decomp = 0.0;
                int violations = 0;
                for (int r = 0; r < reps; ++r) {
                    const ResolventDiagnostics d = compute_w(ensembles[r], z);
                    re[r] = d.w_n.real();
                    im[r] = d.w_n.imag();
                    mag[r] = std::abs(d.w_n);
                    max_decomp = std::max(max_decomp, std::abs(d.w_n - d.w_n1 - d.w_n2));
                    if (!d.bound_ok) ++violations;
                }
                const ValueWithError mre = mean_and_se(re);
                const ValueWithError mim = mean_and_se(im);
                const ValueWithError mabs = mean_and_se(mag);

                double master_re = std::nan(""), master_im = std::nan(""),
                       master_se = std::nan("");
                if (model.mode() == PopulationMode::Identity) {
                    const ComplexWithError res = master_equation_residual(
                        model, dist, size.n, z, reps,
                        derive_stream_key(cfg.seed, combo, 0x4d535452), cfg.threads);
                    master_re = res.value.real();
                    master_im = res.value.imag();
                    master_se = res.std_error;
                }

                z_reports.push_back({{"z_re", z.real()},
                                     {"z_im", z.imag()},
                                     {"mean_w", {mre.value, mim.value}},
                                     {"se_abs_w", mabs.std_error},
                                     {"mean_abs_w", mabs.value},
                                     {"max_decomposition_residual", max_decomp},
                                     {"bound_violations", violations},
                                     {"master_residual", {master_re, master_im}},
                                     {"master_se", master_se}});
                csv += fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(mre.value) + "," +
                       fmt(mim.value) + "," + fmt(mabs.std_error) + "," + fmt(max_decomp) +
                       "," + std::to_string(violations) + "," + fmt(master_re) + "," +
                       fmt(master_im) + "," + fmt(master_se) + "\n";
            }

            json report = {{"p", size.p},
                           {"n", size.n},
                           {"distribution", dist.name()},
                           {"replicates", reps},
                           {"z_points", z_reports}};
            const std::string tag = size_tag(size) + "_" + dist.name();
            files.push_back({"diagnose_" + tag + ".json", report.dump(2) + "\n"});
            files.push_back({"diagnose_" + tag + ".csv", csv});
            ++combo;
        }
    }
    return files;
}

// ----------------------------------------------------------------------- qq

} // namespace

QQReport qq_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.distributions.size() != 2) {
        throw ConfigError("qq_experiment: exactly two distributions required");
    }
    QQReport report;
    for (std::size_t size_idx = 0; size_idx < cfg.sizes.size(); ++size_idx) {
        const SizePair size = cfg.sizes[size_idx];
        const PopulationModel model = cfg.model.build(size.p);

        QqSizeReport sr;
        sr.p = size.p;
        sr.n = size.n;
        sr.cells.resize(cfg.q_list.size());
        for (std::size_t qi = 0; qi < cfg.q_list.size(); ++qi) {
            sr.cells[qi].q = cfg.q_list[qi];
        }

        for (int dist_idx = 0; dist_idx < 2; ++dist_idx) {
            const auto combo =
                static_cast<std::uint64_t>(size_idx) * cfg.distributions.size() +
                static_cast<std::uint64_t>(dist_idx);
            const DistributionSpec& dist = cfg.distributions[dist_idx];

            Eigen::MatrixXd quantiles(cfg.replicates, cfg.q_list.size());
            parallel_for(cfg.replicates, cfg.threads, [&](int r) {
                const SampleEnsemble ens =
                    generate(model, dist, size.n, derive_stream_key(cfg.seed, combo, r));
                const EmpiricalSpectrum spectrum = symmetric_eigenvalues(ens.R);
                for (std::size_t qi = 0; qi < cfg.q_list.size(); ++qi) {
                    quantiles(r, qi) = spectrum.quantile(cfg.q_list[qi]);
                }
            });

            for (std::size_t qi = 0; qi < cfg.q_list.size(); ++qi) {
                std::vector<double> column(quantiles.col(qi).data(),
                                           quantiles.col(qi).data() + cfg.replicates);
                const ValueWithError stats = mean_and_se(column);
                if (dist_idx == 0) {
                    sr.cells[qi].mean_a = stats.value;
                    sr.cells[qi].se_a = stats.std_error;
                } else {
                    sr.cells[qi].mean_b = stats.value;
                    sr.cells[qi].se_b = stats.std_error;
                }
            }
        }

        sr.lsd_reference =
            lsd_reference_quantiles(model, size.p, size.n, cfg.q_list, cfg);
        for (const auto& cell : sr.cells) sr.max_gap = std::max(sr.max_gap, cell.gap());
        report.sizes.push_back(std::move(sr));
    }
    return report;
}

namespace {

std::vector<OutputFile> render_qq(const ExperimentConfig& cfg) {
    const QQReport report = qq_experiment(cfg);
    const std::string name_a = cfg.distributions[0].name();
    const std::string name_b = cfg.distributions[1].name();

    std::vector<OutputFile> files;
    for (const auto& sr : report.sizes) {
        std::string csv = "q,mean_" + name_a + ",se_" + name_a + ",mean_" + name_b +
                          ",se_" + name_b + ",gap,lsd_reference\n";
        for (std::size_t qi = 0; qi < sr.cells.size(); ++qi) {
            const QqCell& c = sr.cells[qi];
            csv += fmt(c.q) + "," + fmt(c.mean_a) + "," + fmt(c.se_a) + "," +
                   fmt(c.mean_b) + "," + fmt(c.se_b) + "," + fmt(c.gap()) + "," +
                   fmt(sr.lsd_reference[qi]) + "\n";
        }
        const std::string tag = std::to_string(sr.p) + "x" + std::to_string(sr.n);
        files.push_back({"qq_" + tag + "_" + name_a + "_vs_" + name_b + ".csv", csv});

        json j = {{"p", sr.p}, {"n", sr.n}, {"max_gap", sr.max_gap},
                  {"replicates", cfg.replicates}};
        files.push_back({"qq_" + tag + "_report.json", j.dump(2) + "\n"});
    }
    return files;
}

// ------------------------------------------------------------------ validate

std::vector<OutputFile> render_validate(const ExperimentConfig& cfg) {
    std::vector<OutputFile> files;
    for (const auto& size : cfg.sizes) {
        const PopulationModel model = cfg.model.build(size.p);
        const AssumptionReport report =
            validate_assumptions(model, static_cast<double>(size.p) / size.n);
        json j = {
            {"p", size.p},
            {"mode", cfg.model.mode},
            {"lambda_min_T", report.lambda_min_T},
            {"max_index_set_size", report.max_index_set_size},
            {"unit_diagonal_ok", report.unit_diagonal_ok},
            {"psd_ok", report.psd_ok},
            {"esd_T_summary", report.esd_T_summary},
        };
        files.push_back({"validate_" + std::to_string(size.p) + ".json", j.dump(2) + "\n"});
    }
    return files;
}

// ------------------------------------------------------------------- moments

std::vector<OutputFile> render_moments(const ExperimentConfig& cfg) {
    const int p = cfg.sizes.front().p;
    std::vector<OutputFile> files;
    std::uint64_t combo = 0;
    for (const auto& dist : cfg.distributions) {
        const PopulationModel model = cfg.model.build(p);
        const LaplaceProfile profile = laplace_profile(dist);

        std::string csv =
            "n,n_e_y4,n_e_y4_se,n_e_y1y2,n_e_y1y2_se,n_max_first,n_max_first_se,"
            "mixed_second_sum,laplace_n_e_y4,laplace_n_e_y1y2\n";
        json rows = json::array();
        for (int n : cfg.n_list) {
            const MomentReport mr = moment_estimates(model, dist, n, cfg.replicates,
                                                     derive_stream_key(cfg.seed, combo),
                                                     cfg.threads);
            // The Laplace route is exact only for i.i.d. rows; report it as a
            // reference column regardless, it is the identity-model value.
            const double lp4 = n * laplace_fourth_moment(profile, n).value;
            const double lp12 = n * laplace_cross_moment(profile, n).value;
            csv += std::to_string(n) + "," + fmt(mr.n_E_Y4.value) + "," +
                   fmt(mr.n_E_Y4.std_error) + "," + fmt(mr.n_E_Y1Y2.value) + "," +
                   fmt(mr.n_E_Y1Y2.std_error) + "," + fmt(mr.n_max_first_moment.value) +
                   "," + fmt(mr.n_max_first_moment.std_error) + "," +
                   fmt(mr.mixed_second_sum) + "," + fmt(lp4) + "," + fmt(lp12) + "\n";
            rows.push_back({{"n", n},
                            {"n_E_Y4", {mr.n_E_Y4.value, mr.n_E_Y4.std_error}},
                            {"n_E_Y1Y2", {mr.n_E_Y1Y2.value, mr.n_E_Y1Y2.std_error}},
                            {"n_max_first_moment",
                             {mr.n_max_first_moment.value, mr.n_max_first_moment.std_error}},
                            {"mixed_second_sum", mr.mixed_second_sum},
                            {"laplace_n_E_Y4", lp4},
                            {"laplace_n_E_Y1Y2", lp12}});
            ++combo;
        }
        files.push_back({"moments_" + dist.name() + ".csv", csv});
        json j = {{"p", p},
                  {"distribution", dist.name()},
                  {"replicates", cfg.replicates},
                  {"rows", rows}};
        files.push_back({"moments_" + dist.name() + ".json", j.dump(2) + "\n"});
    }
    return files;
}

} // namespace

std::vector<OutputFile> render_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.experiment) {
    case ExperimentKind::Simulate: return render_simulate(cfg);
    case ExperimentKind::Mp: return render_mp(cfg);
    case ExperimentKind::Lsd: return render_lsd(cfg);
    case ExperimentKind::Diagnose: return render_diagnose(cfg);
    case ExperimentKind::Qq: return render_qq(cfg);
    case ExperimentKind::Validate: return render_validate(cfg);
    case ExperimentKind::Moments: return render_moments(cfg);
    }
    throw ConfigError("unknown experiment");
}

void run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<OutputFile> files = render_experiment(cfg);

    json manifest = {
        {"tool", "corrspec"},
        {"version", kVersion},
        {"seed_scheme", "splitmix64(seed, combination_index, replicate_index)"},
        {"config", json::parse(serialize_config(cfg))},
    };
    files.push_back({"manifest.json", manifest.dump(2) + "\n"});

    namespace fs = std::filesystem;
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    for (const auto& f : files) {
        std::ofstream out(out_dir / f.relative_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write output file: " +
                                     (out_dir / f.relative_path).string());
        }
        out << f.content;
    }
}

} // namespace corrspec
