#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mdevm/kernels.hpp"
#include "mdevm/mutation.hpp"
#include "mdevm/types.hpp"

namespace mdevm {

/// C_D: mean Euclidean distance from each member to the coordinate-wise mean.
double centroid_distance(const Population& pop);
double centroid_distance(const PointCloud& cloud);

/// P_D: mean Euclidean distance over ordered pairs i != j, i.e. the double
/// sum divided by N_P (N_P - 1). Equal to the mean over unordered pairs.
/// Throws std::invalid_argument for fewer than two members.
double pairwise_distance(const Population& pop);
double pairwise_distance(const PointCloud& cloud);

/// Cloud of `samples` mutants V = origin + F .* difference, with F drawn per
/// `mode` for each sample. Constant gives a single repeated point, scalar
/// random a segment along `difference`, vector random a box.
PointCloud monte_carlo_mutants(const FactorMode& mode, std::span<const double> origin,
                               std::span<const double> difference, std::size_t samples,
                               RandomStream& rng);

/// Singular values (descending) of the n x 2 matrix of displacements from
/// the cloud mean, by one-sided Jacobi. Cloud dimension must be 2.
std::array<double, 2> displacement_singular_values(const PointCloud& cloud);

/// Monte-Carlo trial-vector simulation. A base population of
/// `population_size` points uniform in [0, 1]^dimension is drawn once
/// (independent of the factor mode). Sample k then builds one DE/Rand/1
/// trial for target k mod N_P, with binomial crossover when `with_crossover`.
/// Samples are generated in fixed shards of 256, each with its own substream,
/// so the cloud is identical for every backend and thread count.
struct TrialSimulation {
    std::size_t dimension = 2;
    std::size_t population_size = 5;
    FactorMode factor;
    bool with_crossover = true;
    double cr = 0.9;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    bool compute_pairwise = true;
    kernels::Backend backend = kernels::Backend::Parallel;
};

struct DiversitySample {
    std::size_t dimension = 0;
    std::size_t population_size = 0;
    FactorMode mode;
    bool with_crossover = true;
    std::size_t samples = 0;
    double c_d_mean = 0.0;
    double c_d_se = 0.0;
    double p_d_mean = 0.0; // NaN when pairwise distances were not requested
    double p_d_se = 0.0;
};

PointCloud trial_cloud(const TrialSimulation& sim);

/// C_D and P_D of the generated trial cloud, with standard errors.
DiversitySample monte_carlo_trials(const TrialSimulation& sim);

} // namespace mdevm
