#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdevm/random.hpp"
#include "mdevm/types.hpp"

namespace mdevm {

/// Mutant-vector schemes. Stable identifiers: rand1, best1, t2b1, rand2, best2.
///
///   Rand1          V = X_r1 + F (X_r2 - X_r3)
///                  (N_P = 2: V = X_r1 + F X_r2, the two members in random order)
///   Best1          V = X_best + F (X_r1 - X_r2)
///   TargetToBest1  V = X_i + F (X_best - X_i) + F' (X_r1 - X_r2)
///   Rand2          V = X_r1 + F (X_r2 - X_r3) + F' (X_r4 - X_r5)
///   Best2          V = X_best + F (X_r1 - X_r2) + F' (X_r3 - X_r4)
enum class Scheme { Rand1, Best1, TargetToBest1, Rand2, Best2 };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

/// Smallest population the scheme can run with.
std::size_t min_population(Scheme scheme) noexcept;

/// Number of random donors the scheme draws at population size `n_p`.
std::size_t donor_count(Scheme scheme, std::size_t n_p) noexcept;

/// Number of scaled terms (independent factor draws) in the mutant formula.
std::size_t factor_terms(Scheme scheme) noexcept;

/// Identifiers: cmf, srmf, vrmf.
enum class FactorKind { Constant, ScalarRandom, VectorRandom };

std::string_view to_string(FactorKind kind) noexcept;
FactorKind parse_factor_kind(std::string_view name);

/// How the mutation factor is produced for one scaled term of one trial.
///   Constant      F = value
///   ScalarRandom  F ~ U(lo, hi), one draw shared by every dimension
///   VectorRandom  F_d ~ U(lo, hi), one draw per dimension
struct FactorMode {
    FactorKind kind = FactorKind::VectorRandom;
    double value = 0.9;
    double lo = 0.1;
    double hi = 1.5;

    static FactorMode constant(double f) { return {FactorKind::Constant, f, f, f}; }
    static FactorMode scalar_random(double lo, double hi) { return {FactorKind::ScalarRandom, 0.0, lo, hi}; }
    static FactorMode vector_random(double lo, double hi) { return {FactorKind::VectorRandom, 0.0, lo, hi}; }

    /// Throws InvalidConfiguration unless value > 0 (constant) or 0 <= lo < hi.
    void validate() const;
};

/// One scalar factor draw (no draw for Constant).
double draw_factor(const FactorMode& mode, RandomStream& rng);

/// Factor vector for one scaled term of one trial, length `dimension`.
/// Constant consumes no draws, ScalarRandom one, VectorRandom `dimension`.
std::vector<double> draw_factors(const FactorMode& mode, std::size_t dimension, RandomStream& rng);

struct MutationConfig {
    Scheme scheme = Scheme::Rand1;
    FactorMode factor;
    /// Reuse the first term's factor for the second term instead of drawing again.
    bool shared_factor = false;

    void validate(std::size_t population_size) const;
};

/// Distinct donor indices for `target`. The target is excluded whenever the
/// remaining members suffice; otherwise donors are a partial permutation of
/// the whole population (N_P = 2 and 3 for Rand1, 2 for Best1/T2B1, 4 for
/// Best2, 5 for Rand2). Uses a partial Fisher-Yates shuffle: one `index` draw
/// per donor.
std::vector<std::size_t> select_donors(Scheme scheme, std::size_t population_size,
                                       std::size_t target, RandomStream& rng);

/// Builds V_target. `best` is ignored by schemes that do not use X_best.
///
/// Draw order: donors, then the factor vector of the first term, then the
/// second term's factor vector (skipped when `shared_factor`).
std::vector<double> mutant(const MutationConfig& config, std::span<const Individual> members,
                           std::size_t best, std::size_t target, RandomStream& rng);

/// Binomial crossover. Draws d_rand with `index(D)` and then one `unit()` per
/// dimension; U_d comes from the mutant when unit <= cr or d == d_rand.
std::vector<double> crossover(std::span<const double> parent, std::span<const double> mutant,
                              double cr, RandomStream& rng);

} // namespace mdevm
