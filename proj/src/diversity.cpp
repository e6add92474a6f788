#include "mdevm/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdevm {

double centroid_distance(const Population& pop)
{
    return centroid_distance(to_cloud(pop));
}

double centroid_distance(const PointCloud& cloud)
{
    if (cloud.size() == 0)
        throw std::invalid_argument("centroid_distance: empty population");
    return kernels::serial::centroid_distance(cloud).mean;
}

double pairwise_distance(const Population& pop)
{
    return pairwise_distance(to_cloud(pop));
}

double pairwise_distance(const PointCloud& cloud)
{
    return kernels::serial::pairwise_distance(cloud).mean;
}

PointCloud monte_carlo_mutants(const FactorMode& mode, std::span<const double> origin,
                               std::span<const double> difference, std::size_t samples,
                               RandomStream& rng)
{
    if (origin.size() != difference.size())
        throw std::invalid_argument("monte_carlo_mutants: origin and difference lengths differ");
    mode.validate();
    const std::size_t dim = origin.size();
    PointCloud cloud(dim);
    cloud.coords.reserve(samples * dim);
    std::vector<double> v(dim);
    for (std::size_t s = 0; s < samples; ++s) {
        const auto f = draw_factors(mode, dim, rng);
        for (std::size_t d = 0; d < dim; ++d)
            v[d] = origin[d] + f[d] * difference[d];
        cloud.push_back(v);
    }
    return cloud;
}

std::array<double, 2> displacement_singular_values(const PointCloud& cloud)
{
    if (cloud.dimension != 2)
        throw std::invalid_argument("displacement_singular_values: cloud must be 2-D");
    const std::size_t n = cloud.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += cloud.row(i)[0];
        my += cloud.row(i)[1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = cloud.row(i)[0] - mx;
        b[i] = cloud.row(i)[1] - my;
    }

    // One-sided Jacobi: rotate the two columns until they are orthogonal.
    for (int sweep = 0; sweep < 8; ++sweep) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            alpha += a[i] * a[i];
            beta += b[i] * b[i];
            gamma += a[i] * b[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-300 + 1e-17 * std::sqrt(alpha * beta))
            break;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = a[i], bi = b[i];
            a[i] = c * ai - s * bi;
            b[i] = s * ai + c * bi;
        }
    }
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    return {std::max(na, nb), std::min(na, nb)};
}

namespace {

constexpr std::size_t kShard = 256;

std::string sim_key(const TrialSimulation& sim)
{
    return "d=" + std::to_string(sim.dimension) + ",np=" + std::to_string(sim.population_size);
}

void fill_shard(const TrialSimulation& sim, std::span<const Individual> base, std::size_t shard,
                PointCloud& cloud)
{
    RandomStream rng(derive_seed(sim.seed, "trials/" + sim_key(sim), shard));
    const MutationConfig config{Scheme::Rand1, sim.factor, false};
    const std::size_t end = std::min(sim.samples, (shard + 1) * kShard);
    for (std::size_t k = shard * kShard; k < end; ++k) {
        const std::size_t target = k % base.size();
        auto v = mutant(config, base, 0, target, rng);
        if (sim.with_crossover)
            v = crossover(base[target].position, v, sim.cr, rng);
        std::copy(v.begin(), v.end(), cloud.row(k).begin());
    }
}

} // namespace

PointCloud trial_cloud(const TrialSimulation& sim)
{
    if (sim.dimension == 0 || sim.samples == 0)
        throw InvalidConfiguration("simulation needs dimension >= 1 and samples >= 1");
    if (sim.population_size < min_population(Scheme::Rand1))
        throw InvalidConfiguration("simulation needs N_P >= 2");
    if (!(sim.cr >= 0.0 && sim.cr <= 1.0))
        throw InvalidConfiguration("crossover rate must lie in [0, 1]");
    sim.factor.validate();

    RandomStream base_rng(derive_seed(sim.seed, "base/" + sim_key(sim), 0));
    std::vector<Individual> base(sim.population_size);
    for (auto& m : base) {
        m.position.resize(sim.dimension);
        for (auto& v : m.position)
            v = base_rng.unit();
    }

    PointCloud cloud(sim.dimension);
    cloud.coords.assign(sim.samples * sim.dimension, 0.0);
    const std::size_t shards = (sim.samples + kShard - 1) / kShard;
    if (sim.backend == kernels::Backend::Serial) {
        for (std::size_t s = 0; s < shards; ++s)
            fill_shard(sim, base, s, cloud);
    } else {
        const auto n = static_cast<std::ptrdiff_t>(shards);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t s = 0; s < n; ++s)
            fill_shard(sim, base, static_cast<std::size_t>(s), cloud);
    }
    return cloud;
}

DiversitySample monte_carlo_trials(const TrialSimulation& sim)
{
    const auto cloud = trial_cloud(sim);
    DiversitySample out;
    out.dimension = sim.dimension;
    out.population_size = sim.population_size;
    out.mode = sim.factor;
    out.with_crossover = sim.with_crossover;
    out.samples = sim.samples;

    const auto cd = kernels::centroid_distance(cloud, sim.backend);
    out.c_d_mean = cd.mean;
    out.c_d_se = cd.standard_error;
    if (sim.compute_pairwise && cloud.size() >= 2) {
        const auto pd = kernels::pairwise_distance(cloud, sim.backend);
        out.p_d_mean = pd.mean;
        out.p_d_se = pd.standard_error;
    } else {
        out.p_d_mean = std::numeric_limits<double>::quiet_NaN();
        out.p_d_se = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

} // namespace mdevm
