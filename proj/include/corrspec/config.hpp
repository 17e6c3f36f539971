#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrspec/distributions.hpp"
#include "corrspec/population.hpp"

namespace corrspec {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Simulate, Mp, Lsd, Diagnose, Qq, Validate, Moments };

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

/// Population model described by construction recipe; materialized per p.
struct ModelSpec {
    std::string mode = "identity"; // identity | banded_toeplitz | sparse_root
    std::vector<double> coeffs;

    PopulationModel build(int p) const;
};

struct SizePair {
    int p = 0;
    int n = 0;
};

struct XGridSpec {
    double min = 0.05;
    double max = 3.2;
    int points = 400;

    std::vector<double> materialize() const;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Simulate;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int replicates = 50;
    int threads = 1;
    ModelSpec model;
    std::vector<DistributionSpec> distributions;
    std::vector<SizePair> sizes;
    std::vector<double> q_list;
    std::vector<std::complex<double>> z_grid;
    std::optional<double> gamma;
    std::optional<XGridSpec> x_grid;
    double epsilon = 1e-3;
    std::vector<int> n_list;

    // Solver overrides ("tolerances" block).
    double lsd_damping = 0.5;
    double lsd_tol = 1e-10;
    int lsd_max_iter = 10000;

    /// Structural validation across all referenced (model, p, n, dist)
    /// combinations; throws ConfigError before any computation starts.
    void validate() const;
};

/// Parses a config document; also accepts an emitted manifest (the nested
/// "config" object is unwrapped), so re-running a manifest reproduces a run.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical JSON echo; byte-stable for identical configs.
std::string serialize_config(const ExperimentConfig& cfg);

/// Serialization of distribution specs shared by config and manifests.
DistributionSpec distribution_from_strings(const std::string& kind, double param);

} // namespace corrspec
