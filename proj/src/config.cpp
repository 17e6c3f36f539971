#include "corrspec/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace corrspec {

using nlohmann::json;

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Mp: return "mp";
    case ExperimentKind::Lsd: return "lsd";
    case ExperimentKind::Diagnose: return "diagnose";
    case ExperimentKind::Qq: return "qq";
    case ExperimentKind::Validate: return "validate";
    case ExperimentKind::Moments: return "moments";
    }
    return "unknown";
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "simulate") return ExperimentKind::Simulate;
    if (name == "mp") return ExperimentKind::Mp;
    if (name == "lsd") return ExperimentKind::Lsd;
    if (name == "diagnose") return ExperimentKind::Diagnose;
    if (name == "qq") return ExperimentKind::Qq;
    if (name == "validate") return ExperimentKind::Validate;
    if (name == "moments") return ExperimentKind::Moments;
    throw ConfigError("unknown experiment kind: " + name);
}

PopulationModel ModelSpec::build(int p) const {
    if (mode == "identity") return build_identity(p);
    if (mode == "banded_toeplitz") return build_banded_toeplitz(p, coeffs);
    if (mode == "sparse_root") return build_from_sparse_root(p, coeffs);
    throw ConfigError("unknown model mode: " + mode);
}

std::vector<double> XGridSpec::materialize() const {
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = points == 1 ? min : min + (max - min) * i / (points - 1);
    }
    return grid;
}

DistributionSpec distribution_from_strings(const std::string& kind, double param) {
    if (kind == "gaussian") return DistributionSpec::gaussian();
    if (kind == "student_t") return DistributionSpec::student_t(param);
    if (kind == "symmetrized_pareto") return DistributionSpec::symmetrized_pareto(param);
    if (kind == "centered_exponential") return DistributionSpec::centered_exponential();
    throw ConfigError("unknown distribution kind: " + kind);
}

namespace {

json distribution_to_json(const DistributionSpec& d) {
    json j;
    switch (d.kind()) {
    case DistKind::Gaussian: j["kind"] = "gaussian"; break;
    case DistKind::StudentT: j["kind"] = "student_t"; j["dof"] = d.parameter(); break;
    case DistKind::SymmetrizedPareto:
        j["kind"] = "symmetrized_pareto";
        j["alpha"] = d.parameter();
        break;
    case DistKind::CenteredExponential: j["kind"] = "centered_exponential"; break;
    }
    return j;
}

DistributionSpec distribution_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    double param = 0.0;
    if (j.contains("dof")) param = j["dof"].get<double>();
    if (j.contains("alpha")) param = j["alpha"].get<double>();
    return distribution_from_strings(kind, param);
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (root.contains("config")) root = root["config"]; // manifest round-trip

    ExperimentConfig cfg;
    try {
        cfg.experiment = experiment_from_name(root.at("experiment").get<std::string>());
        cfg.seed = root.value("seed", std::uint64_t{1});
        cfg.output_dir = root.value("output_dir", std::string("out"));
        cfg.replicates = root.value("replicates", 50);
        cfg.threads = root.value("threads", 1);

        if (root.contains("model")) {
            cfg.model.mode = root["model"].value("mode", std::string("identity"));
            cfg.model.coeffs = root["model"].value("coeffs", std::vector<double>{});
        }
        if (root.contains("distributions")) {
            for (const auto& d : root["distributions"]) {
                cfg.distributions.push_back(distribution_from_json(d));
            }
        }
        if (root.contains("sizes")) {
            for (const auto& s : root["sizes"]) {
                cfg.sizes.push_back({s.at("p").get<int>(), s.at("n").get<int>()});
            }
        } else if (root.contains("p") && root.contains("n")) {
            cfg.sizes.push_back({root["p"].get<int>(), root["n"].get<int>()});
        }
        cfg.q_list = root.value("q_list", std::vector<double>{});
        if (root.contains("z_grid")) {
            for (const auto& z : root["z_grid"]) {
                cfg.z_grid.emplace_back(z.at("re").get<double>(), z.at("im").get<double>());
            }
        }
        if (root.contains("gamma")) cfg.gamma = root["gamma"].get<double>();
        if (root.contains("x_grid")) {
            XGridSpec g;
            g.min = root["x_grid"].at("min").get<double>();
            g.max = root["x_grid"].at("max").get<double>();
            g.points = root["x_grid"].value("points", 400);
            cfg.x_grid = g;
        }
        cfg.epsilon = root.value("epsilon", 1e-3);
        cfg.n_list = root.value("n_list", std::vector<int>{});
        if (root.contains("tolerances")) {
            const auto& t = root["tolerances"];
            cfg.lsd_damping = t.value("lsd_damping", cfg.lsd_damping);
            cfg.lsd_tol = t.value("lsd_tol", cfg.lsd_tol);
            cfg.lsd_max_iter = t.value("lsd_max_iter", cfg.lsd_max_iter);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json root;
    root["experiment"] = experiment_name(cfg.experiment);
    root["seed"] = cfg.seed;
    root["output_dir"] = cfg.output_dir;
    root["replicates"] = cfg.replicates;
    root["threads"] = cfg.threads;
    root["model"] = {{"mode", cfg.model.mode}, {"coeffs", cfg.model.coeffs}};
    json dists = json::array();
    for (const auto& d : cfg.distributions) dists.push_back(distribution_to_json(d));
    root["distributions"] = dists;
    json sizes = json::array();
    for (const auto& s : cfg.sizes) sizes.push_back({{"p", s.p}, {"n", s.n}});
    root["sizes"] = sizes;
    root["q_list"] = cfg.q_list;
    json zs = json::array();
    for (const auto& z : cfg.z_grid) zs.push_back({{"re", z.real()}, {"im", z.imag()}});
    root["z_grid"] = zs;
    if (cfg.gamma) root["gamma"] = *cfg.gamma;
    if (cfg.x_grid) {
        root["x_grid"] = {{"min", cfg.x_grid->min},
                          {"max", cfg.x_grid->max},
                          {"points", cfg.x_grid->points}};
    }
    root["epsilon"] = cfg.epsilon;
    root["n_list"] = cfg.n_list;
    root["tolerances"] = {{"lsd_damping", cfg.lsd_damping},
                          {"lsd_tol", cfg.lsd_tol},
                          {"lsd_max_iter", cfg.lsd_max_iter}};
    return root.dump(2);
}

void ExperimentConfig::validate() const {
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(lsd_damping > 0.0 && lsd_damping <= 1.0)) {
        throw ConfigError("lsd_damping must lie in (0, 1]");
    }
    for (double q : q_list) {
        if (!(q > 0.0 && q < 1.0)) throw ConfigError("q_list entries must lie in (0,1)");
    }
    for (const auto& z : z_grid) {
        if (!(z.imag() > 0.0)) throw ConfigError("z_grid entries must have Im z > 0");
    }
    for (const auto& s : sizes) {
        if (s.p < 1 || s.n < 2) throw ConfigError("sizes require p >= 1 and n >= 2");
        try {
            (void)model.build(s.p); // catches non-psd targets, bad bandwidths, ...
        } catch (const std::exception& e) {
            throw ConfigError("model invalid at p = " + std::to_string(s.p) + ": " +
                              e.what());
        }
    }
    if (gamma && !(*gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (x_grid && (x_grid->points < 2 || !(x_grid->max > x_grid->min))) {
        throw ConfigError("x_grid must have points >= 2 and max > min");
    }
    for (int n : n_list) {
        if (n < 2) throw ConfigError("n_list entries must be >= 2");
    }

    switch (experiment) {
    case ExperimentKind::Simulate:
        if (sizes.empty()) throw ConfigError("simulate: needs sizes (or p and n)");
        if (distributions.empty()) throw ConfigError("simulate: needs distributions");
        break;
    case ExperimentKind::Mp:
        if (!gamma) throw ConfigError("mp: needs gamma");
        break;
    case ExperimentKind::Lsd:
        if (sizes.empty()) throw ConfigError("lsd: needs sizes (or p and n)");
        break;
    case ExperimentKind::Diagnose:
        if (sizes.empty() || distributions.empty() || z_grid.empty()) {
            throw ConfigError("diagnose: needs sizes, distributions and z_grid");
        }
        break;
    case ExperimentKind::Qq:
        if (distributions.size() != 2) throw ConfigError("qq: needs exactly 2 distributions");
        if (sizes.empty()) throw ConfigError("qq: needs sizes");
        if (q_list.empty()) throw ConfigError("qq: needs q_list");
        break;
    case ExperimentKind::Validate:
        if (sizes.empty()) throw ConfigError("validate: needs sizes (or p and n)");
        break;
    case ExperimentKind::Moments:
        if (distributions.empty()) throw ConfigError("moments: needs distributions");
        if (n_list.empty()) throw ConfigError("moments: needs n_list");
        if (sizes.empty()) throw ConfigError("moments: needs sizes (p is used for rows)");
        break;
    }
}

} // namespace corrspec
