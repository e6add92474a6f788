#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mdevm/kernels.hpp"
#include "mdevm/mutation.hpp"
#include "mdevm/random.hpp"
#include "mdevm/types.hpp"

namespace mdevm {

struct TerminationCriteria {
    double vtr = 0.0;
    double evtr = 1e-8;
    std::size_t nfc_max = 0;
};

enum class Termination { ErrorReached, BudgetExhausted };

std::string_view to_string(Termination t) noexcept;
Termination parse_termination(std::string_view name);

/// One row per generation, taken after that generation's evaluations.
struct HistoryEntry {
    std::size_t generation = 0;
    std::size_t nfc = 0;
    double best_value_so_far = 0.0;
    double centroid_diversity = 0.0;
    double pairwise_diversity = 0.0;
};

struct RunRecord {
    std::vector<HistoryEntry> history;
    Individual final_best;
    Termination terminated_by = Termination::BudgetExhausted;

    std::size_t nfc() const noexcept { return history.empty() ? 0 : history.back().nfc; }
};

/// Serial evaluates trials one after another; Parallel fans the N_P trial
/// evaluations of a generation out over OpenMP threads. Both give identical
/// results because every random draw happens before evaluation.
enum class EvaluationPolicy { Serial, Parallel };

struct RunConfig {
    Bounds bounds;
    std::size_t population_size = 5;
    MutationConfig mutation;
    double cr = 0.9;
    TerminationCriteria termination;
    std::uint64_t seed = 0;
    EvaluationPolicy evaluation = EvaluationPolicy::Serial;

    void validate() const;
};

/// Uniform initial population, fitness unevaluated, generation 0.
Population initialize_population(const Bounds& bounds, std::size_t population_size,
                                 RandomStream& rng);

/// Evaluates every member lacking a fitness; adds the number of calls to `nfc`.
void evaluate_population(Population& pop, const Objective& objective, std::size_t& nfc,
                         EvaluationPolicy policy = EvaluationPolicy::Serial);

/// In-range coordinates pass through; each out-of-range coordinate is
/// replaced by a fresh uniform draw over its interval (one `unit()` each,
/// in dimension order).
std::vector<double> repair_bounds(std::span<const double> position, const Bounds& bounds,
                                  RandomStream& rng);

/// One synchronous generation: all N_P trials are built from `pop` first
/// (mutation, crossover, repair, per target in index order), then evaluated,
/// then each slot keeps the trial when f(U) <= f(X). `nfc` grows by N_P.
Population step_generation(const Population& pop, const MutationConfig& mutation, double cr,
                           const Bounds& bounds, const Objective& objective, RandomStream& rng,
                           std::size_t& nfc,
                           EvaluationPolicy policy = EvaluationPolicy::Serial);

/// Full run from a random initial population seeded by `config.seed`.
RunRecord run(const RunConfig& config, const Objective& objective);

/// Full run from a caller-supplied initial population. Unevaluated members
/// are evaluated (and charged to NFC) first.
RunRecord run(const RunConfig& config, const Objective& objective, Population initial,
              RandomStream& rng);

} // namespace mdevm
