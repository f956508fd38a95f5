#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fdilab/attack.hpp"
#include "fdilab/measgen.hpp"
#include "fdilab/recover.hpp"

namespace fdilab {

/// Minimal TOML-style reader: `key = value` lines, optional [table]
/// headers (flattened into dotted keys), scalars (number, bool, quoted
/// string) and single-line arrays. Enough to describe an experiment; no
/// nested tables.
class ConfigFile {
public:
    using Value = std::variant<double, bool, std::string, std::vector<double>,
                               std::vector<std::string>>;

    static ConfigFile parse(std::string_view text);
    static ConfigFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> strings(const std::string& key) const;

private:
    const Value* find(const std::string& key) const;
    std::map<std::string, Value> values_;
};

enum class ExperimentKind { pmis, gross_error, solver_bench };

ExperimentKind experiment_kind_from_name(const std::string& name);
const char* experiment_kind_name(ExperimentKind kind);

/// Everything a campaign needs; mirrors the config file schema
/// one-to-one so runs are reproducible from (file, master seed).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::pmis;
    std::string case_path;
    std::vector<std::string> cases; // solver benchmark may span several

    int t = 500;
    int trials = 1000;
    double snr_db_min = 20.0;
    double snr_db_max = 35.0;
    double state_sigma = 0.01;
    double confidence = 0.95;
    double gamma = 0.995;
    double attack_norm = 1.0;
    std::uint64_t seed = 1;

    std::vector<AttackStrategy> strategies; // empty: all five
    bool heuristic_rank_for_pca = false;    // pca/svd basis size: n (false) or Algorithm-1 rho

    double gross_density = 0.0;
    GrossRule gross_rule = GrossRule::multiple_of_max;
    double gross_k = 10.0;

    std::vector<double> tau_grid; // empty: derived sweep
    int tau_points = 61;

    std::vector<RpcaSolver> solvers;         // empty: all four
    std::vector<double> densities = {0.01, 0.05};
    double rpca_tol = 1e-7;
    int rpca_max_iter = 3000;

    int threads = 0; // 0: hardware concurrency
    std::string out_dir = "out";

    std::vector<AttackStrategy> effective_strategies() const;
    std::vector<RpcaSolver> effective_solvers() const;
};

ExperimentConfig config_from_file(const std::filesystem::path& path);
ExperimentConfig config_from_text(std::string_view text);

/// Canonical echo of every field, written into summary.txt and usable
/// as a config file again.
std::string render_config(const ExperimentConfig& config);

} // namespace fdilab
