#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdevm/benchmarks.hpp"
#include "mdevm/engine.hpp"
#include "mdevm/mutation.hpp"
#include "mdevm/stats.hpp"

namespace mdevm {

/// Run matrix description. Every field has a default; a JSON config only
/// lists what it changes, and unknown keys are rejected.
///
///   {
///     "functions": ["sphere", "rastrigin"],
///     "schemes": ["best1"], "modes": ["cmf", "vrmf"],
///     "n_p": [5], "d": [30],
///     "cr": 0.9,
///     "termination": {"evtr": 1e-8, "nfc_max_multiplier": 1000},
///     "factor": {"cmf": 0.9, "range": [0.1, 1.5], "shared_across_terms": false},
///     "n_run": 30, "master_seed": 1, "workers": 1
///   }
struct ExperimentConfig {
    std::vector<std::string> functions = {"sphere"};
    std::vector<Scheme> schemes = {Scheme::Best1};
    std::vector<FactorKind> modes = {FactorKind::VectorRandom};
    std::vector<std::size_t> population_sizes = {5};
    std::vector<std::size_t> dimensions = {10};
    double cr = 0.9;
    double evtr = 1e-8;
    double nfc_max_multiplier = 1000.0;
    std::size_t n_run = 30;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
    double cmf_value = 0.9;
    double factor_lo = 0.1;
    double factor_hi = 1.5;
    bool shared_factor = false;

    /// Throws InvalidConfiguration on unknown keys, bad types or values, and
    /// any (scheme, n_p) pair the scheme cannot run with.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;

    FactorMode factor_mode(FactorKind kind) const;
    std::size_t nfc_max(std::size_t dimension) const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// One point of the matrix. Id format: "<function>__<scheme>__<mode>__np<N>__d<D>".
/// The family id drops the function: "<scheme>__<mode>__np<N>__d<D>".
struct Cell {
    std::string function;
    Scheme scheme = Scheme::Rand1;
    FactorKind mode = FactorKind::VectorRandom;
    std::size_t n_p = 0;
    std::size_t d = 0;

    std::string id() const;
    std::string family() const;
};

std::vector<Cell> expand_cells(const ExperimentConfig& config);

/// Function factory used by the harness; the default is `make_function`.
using FunctionFactory =
    std::function<BenchmarkFunction(const std::string& name, std::size_t dim, std::uint64_t seed)>;

struct RunSummary {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string file;
    double final_best_value = 0.0;
    double final_error = 0.0;
    std::vector<double> final_position;
    Termination terminated_by = Termination::BudgetExhausted;
    std::size_t nfc = 0;
    std::size_t generations = 0;
};

struct CellResult {
    Cell cell;
    double vtr = 0.0;
    bool failed = false;
    std::string error;
    std::vector<RunSummary> runs;
};

/// On-disk experiment archive:
///
///   <root>/manifest.json                 config snapshot, seeds, per-run summaries
///   <root>/<cell id>/run_<k>.csv         generation,nfc,best_value_so_far,
///                                        centroid_diversity,pairwise_diversity
///   <root>/problems/<function>_d<D>.json shift/rotation data of composites
///
/// Every report is computed from these files alone.
class Archive {
public:
    static Archive load(const std::filesystem::path& root);

    const std::filesystem::path& root() const noexcept { return root_; }
    const ExperimentConfig& config() const noexcept { return config_; }
    const std::vector<CellResult>& cells() const noexcept { return cells_; }
    const CellResult& cell(const std::string& id) const;
    bool has_failures() const noexcept;

    std::vector<HistoryEntry> history(const CellResult& cell, std::size_t run) const;

private:
    friend Archive run_matrix(const ExperimentConfig&, const std::filesystem::path&,
                              const FunctionFactory&);
    std::filesystem::path root_;
    ExperimentConfig config_;
    std::vector<CellResult> cells_;
};

/// Executes `n_run` runs per cell on `config.workers` threads and writes the
/// archive under `out`. Run k of a cell is seeded with
/// derive_seed(master_seed, cell id, k). A run that throws marks its cell
/// failed; the other cells still complete.
Archive run_matrix(const ExperimentConfig& config, const std::filesystem::path& out,
                   const FunctionFactory& factory = make_function);

/// Per-generation aggregate over the runs of a cell. Runs that stopped early
/// contribute their last row to later generations.
struct CurveRow {
    std::size_t nfc = 0;
    double best_median = 0.0;
    double best_iqr = 0.0;
    double c_d_median = 0.0;
    double p_d_median = 0.0;
};

std::vector<CurveRow> curves(const Archive& archive, const std::string& cell_id);
std::string curves_csv(const std::vector<CurveRow>& rows);

/// Wilcoxon comparison of two cell families over their shared functions,
/// on final errors |BFV - VTR|. Throws std::invalid_argument listing the
/// functions that only one family covers.
stats::ComparisonReport compare(const Archive& archive, const std::string& reference_family,
                                const std::string& opponent_family, double alpha = 0.05);

} // namespace mdevm
