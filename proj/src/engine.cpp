#include "mdevm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mdevm {

std::string_view to_string(Termination t) noexcept
{
    return t == Termination::ErrorReached ? "error_reached" : "budget_exhausted";
}

Termination parse_termination(std::string_view name)
{
    if (name == "error_reached")
        return Termination::ErrorReached;
    if (name == "budget_exhausted")
        return Termination::BudgetExhausted;
    throw std::invalid_argument("unknown termination '" + std::string(name) + "'");
}

void RunConfig::validate() const
{
    if (population_size < 2)
        throw InvalidConfiguration("population size must be at least 2");
    mutation.validate(population_size);
    if (!(cr >= 0.0 && cr <= 1.0))
        throw InvalidConfiguration("crossover rate must lie in [0, 1]");
    if (!(termination.evtr >= 0.0))
        throw InvalidConfiguration("EVTR must be >= 0");
    if (termination.nfc_max < population_size)
        throw InvalidConfiguration("NFC_Max must allow one full evaluation pass (>= N_P)");
}

Population initialize_population(const Bounds& bounds, std::size_t population_size,
                                  RandomStream& rng)
{
    if (population_size < 2)
        throw InvalidConfiguration("population size must be at least 2");
    Population pop;
    pop.members.resize(population_size);
    for (auto& m : pop.members) {
        m.position.resize(bounds.dimension());
        for (std::size_t d = 0; d < bounds.dimension(); ++d)
            m.position[d] = bounds.lower(d) + rng.unit() * (bounds.upper(d) - bounds.lower(d));
    }
    return pop;
}

namespace {

void evaluate_points(std::span<const std::vector<double>> points, const Objective& objective,
                     std::span<double> out, EvaluationPolicy policy)
{
    if (policy == EvaluationPolicy::Parallel)
        kernels::parallel::evaluate(points, objective, out);
    else
        kernels::serial::evaluate(points, objective, out);
}

HistoryEntry snapshot(const Population& pop, std::size_t nfc, double best_so_far)
{
    const auto cloud = to_cloud(pop);
    HistoryEntry e;
    e.generation = pop.generation;
    e.nfc = nfc;
    e.best_value_so_far = best_so_far;
    e.centroid_diversity = kernels::serial::centroid_distance(cloud).mean;
    e.pairwise_diversity = kernels::serial::pairwise_distance(cloud).mean;
    return e;
}

} // namespace

void evaluate_population(Population& pop, const Objective& objective, std::size_t& nfc,
                         EvaluationPolicy policy)
{
    std::vector<std::size_t> pending;
    std::vector<std::vector<double>> points;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop.members[i].fitness) {
            pending.push_back(i);
            points.push_back(pop.members[i].position);
        }
    }
    std::vector<double> values(points.size());
    evaluate_points(points, objective, values, policy);
    for (std::size_t k = 0; k < pending.size(); ++k)
        pop.members[pending[k]].fitness = values[k];
    nfc += pending.size();
}

std::vector<double> repair_bounds(std::span<const double> position, const Bounds& bounds,
                                  RandomStream& rng)
{
    std::vector<double> out(position.begin(), position.end());
    for (std::size_t d = 0; d < out.size(); ++d) {
        if (!(out[d] >= bounds.lower(d) && out[d] <= bounds.upper(d)))
            out[d] = bounds.lower(d) + rng.unit() * (bounds.upper(d) - bounds.lower(d));
    }
    return out;
}

Population step_generation(const Population& pop, const MutationConfig& mutation, double cr,
                           const Bounds& bounds, const Objective& objective, RandomStream& rng,
                           std::size_t& nfc, EvaluationPolicy policy)
{
    const std::size_t n_p = pop.size();
    mutation.validate(n_p);
    if (!(cr >= 0.0 && cr <= 1.0))
        throw InvalidConfiguration("crossover rate must lie in [0, 1]");
    const std::size_t best = pop.best_index();

    std::vector<std::vector<double>> trials(n_p);
    for (std::size_t i = 0; i < n_p; ++i) {
        const auto v = mutant(mutation, pop.members, best, i, rng);
        const auto u = crossover(pop.members[i].position, v, cr, rng);
        trials[i] = repair_bounds(u, bounds, rng);
    }

    std::vector<double> values(n_p);
    evaluate_points(trials, objective, values, policy);
    nfc += n_p;

    Population next;
    next.generation = pop.generation + 1;
    next.members.resize(n_p);
    for (std::size_t i = 0; i < n_p; ++i) {
        if (values[i] <= *pop.members[i].fitness)
            next.members[i] = Individual{std::move(trials[i]), values[i]};
        else
            next.members[i] = pop.members[i];
    }
    return next;
}

RunRecord run(const RunConfig& config, const Objective& objective)
{
    config.validate();
    RandomStream rng(config.seed);
    auto initial = initialize_population(config.bounds, config.population_size, rng);
    return run(config, objective, std::move(initial), rng);
}

RunRecord run(const RunConfig& config, const Objective& objective, Population pop,
              RandomStream& rng)
{
    config.validate();
    if (pop.size() != config.population_size)
        throw InvalidConfiguration("initial population size does not match N_P");
    for (const auto& m : pop.members)
        if (m.position.size() != config.bounds.dimension())
            throw InvalidConfiguration("initial population dimension does not match bounds");

    const auto& term = config.termination;
    const std::size_t n_p = config.population_size;
    std::size_t nfc = 0;
    evaluate_population(pop, objective, nfc, config.evaluation);

    RunRecord record;
    double best_so_far = pop.best_fitness();
    record.history.push_back(snapshot(pop, nfc, best_so_far));

    auto reached = [&] { return std::abs(best_so_far - term.vtr) <= term.evtr; };
    while (!reached() && nfc + n_p <= term.nfc_max) {
        pop = step_generation(pop, config.mutation, config.cr, config.bounds, objective, rng, nfc,
                              config.evaluation);
        best_so_far = std::min(best_so_far, pop.best_fitness());
        record.history.push_back(snapshot(pop, nfc, best_so_far));
    }

    record.terminated_by = reached() ? Termination::ErrorReached : Termination::BudgetExhausted;
    record.final_best = pop.members[pop.best_index()];
    return record;
}

} // namespace mdevm
