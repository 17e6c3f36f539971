#pragma once

#include <string>
#include <vector>

#include "corrspec/config.hpp"
#include "corrspec/diagnostics.hpp"
#include "corrspec/limit_laws.hpp"

namespace corrspec {

/// One output file, rendered fully in memory before anything hits disk.
struct OutputFile {
    std::string relative_path;
    std::string content;
};

/// Simulated-vs-theoretical quantile study of the correlation-matrix ESD for
/// two entry laws sharing one population model.
struct QqCell {
    double q = 0.0;
    double mean_a = 0.0, se_a = 0.0;
    double mean_b = 0.0, se_b = 0.0;
    double gap() const { return mean_a > mean_b ? mean_a - mean_b : mean_b - mean_a; }
};

struct QqSizeReport {
    int p = 0, n = 0;
    std::vector<QqCell> cells;           // one per q, ascending in q
    std::vector<double> lsd_reference;   // theoretical quantiles, same order
    double max_gap = 0.0;
};

struct QQReport {
    std::vector<QqSizeReport> sizes;
};

QQReport qq_experiment(const ExperimentConfig& cfg);

/// Renders every output of the configured experiment without touching disk.
std::vector<OutputFile> render_experiment(const ExperimentConfig& cfg);

/// Validates, computes, then writes outputs plus manifest.json under
/// cfg.output_dir. Nothing is written unless the whole computation succeeds.
void run_experiment(const ExperimentConfig& cfg);

} // namespace corrspec
