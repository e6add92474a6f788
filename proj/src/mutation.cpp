#include "mdevm/mutation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdevm {

std::string_view to_string(Scheme scheme) noexcept
{
    switch (scheme) {
    case Scheme::Rand1: return "rand1";
    case Scheme::Best1: return "best1";
    case Scheme::TargetToBest1: return "t2b1";
    case Scheme::Rand2: return "rand2";
    case Scheme::Best2: return "best2";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name)
{
    for (auto s : {Scheme::Rand1, Scheme::Best1, Scheme::TargetToBest1, Scheme::Rand2, Scheme::Best2})
        if (to_string(s) == name)
            return s;
    throw InvalidConfiguration("unknown mutation scheme '" + std::string(name) + "'");
}

std::size_t min_population(Scheme scheme) noexcept
{
    switch (scheme) {
    case Scheme::Rand1:
    case Scheme::Best1:
    case Scheme::TargetToBest1: return 2;
    case Scheme::Best2: return 4;
    case Scheme::Rand2: return 5;
    }
    return 0;
}

std::size_t donor_count(Scheme scheme, std::size_t n_p) noexcept
{
    switch (scheme) {
    case Scheme::Rand1: return n_p == 2 ? 2 : 3;
    case Scheme::Best1:
    case Scheme::TargetToBest1: return 2;
    case Scheme::Best2: return 4;
    case Scheme::Rand2: return 5;
    }
    return 0;
}

std::size_t factor_terms(Scheme scheme) noexcept
{
    switch (scheme) {
    case Scheme::Rand1:
    case Scheme::Best1: return 1;
    case Scheme::TargetToBest1:
    case Scheme::Rand2:
    case Scheme::Best2: return 2;
    }
    return 0;
}

std::string_view to_string(FactorKind kind) noexcept
{
    switch (kind) {
    case FactorKind::Constant: return "cmf";
    case FactorKind::ScalarRandom: return "srmf";
    case FactorKind::VectorRandom: return "vrmf";
    }
    return "?";
}

FactorKind parse_factor_kind(std::string_view name)
{
    for (auto k : {FactorKind::Constant, FactorKind::ScalarRandom, FactorKind::VectorRandom})
        if (to_string(k) == name)
            return k;
    throw InvalidConfiguration("unknown factor mode '" + std::string(name) + "'");
}

void FactorMode::validate() const
{
    if (kind == FactorKind::Constant) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw InvalidConfiguration("constant mutation factor must be > 0");
        return;
    }
    if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(hi))
        throw InvalidConfiguration("mutation factor range must satisfy 0 <= lo < hi");
}

double draw_factor(const FactorMode& mode, RandomStream& rng)
{
    if (mode.kind == FactorKind::Constant)
        return mode.value;
    return rng.uniform(mode.lo, mode.hi);
}

std::vector<double> draw_factors(const FactorMode& mode, std::size_t dimension, RandomStream& rng)
{
    switch (mode.kind) {
    case FactorKind::Constant: return std::vector<double>(dimension, mode.value);
    case FactorKind::ScalarRandom: return std::vector<double>(dimension, rng.uniform(mode.lo, mode.hi));
    case FactorKind::VectorRandom: {
        std::vector<double> f(dimension);
        for (auto& v : f)
            v = rng.uniform(mode.lo, mode.hi);
        return f;
    }
    }
    return {};
}

void MutationConfig::validate(std::size_t population_size) const
{
    factor.validate();
    if (population_size < min_population(scheme))
        throw InvalidConfiguration("scheme " + std::string(to_string(scheme)) + " needs N_P >= "
                                   + std::to_string(min_population(scheme)) + ", got "
                                   + std::to_string(population_size));
}

std::vector<std::size_t> select_donors(Scheme scheme, std::size_t population_size,
                                       std::size_t target, RandomStream& rng)
{
    const std::size_t k = donor_count(scheme, population_size);
    if (population_size < min_population(scheme) || k > population_size)
        throw InvalidConfiguration("scheme " + std::string(to_string(scheme)) + " needs N_P >= "
                                   + std::to_string(min_population(scheme)));
    if (target >= population_size)
        throw std::out_of_range("select_donors: target index out of range");

    std::vector<std::size_t> pool;
    pool.reserve(population_size);
    const bool exclude_target = population_size - 1 >= k;
    for (std::size_t j = 0; j < population_size; ++j)
        if (!exclude_target || j != target)
            pool.push_back(j);

    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pick = j + rng.index(pool.size() - j);
        std::swap(pool[j], pool[pick]);
    }
    pool.resize(k);
    return pool;
}

namespace {

// out += f .* (a - b)
void add_scaled_difference(std::vector<double>& out, std::span<const double> f,
                           std::span<const double> a, std::span<const double> b)
{
    for (std::size_t d = 0; d < out.size(); ++d)
        out[d] += f[d] * (a[d] - b[d]);
}

} // namespace

std::vector<double> mutant(const MutationConfig& config, std::span<const Individual> members,
                           std::size_t best, std::size_t target, RandomStream& rng)
{
    const std::size_t n_p = members.size();
    config.validate(n_p);
    const std::size_t dim = members[target].position.size();
    const auto donors = select_donors(config.scheme, n_p, target, rng);
    auto x = [&](std::size_t i) -> std::span<const double> { return members[i].position; };

    const auto f1 = draw_factors(config.factor, dim, rng);
    std::vector<double> f2;
    if (factor_terms(config.scheme) == 2)
        f2 = config.shared_factor ? f1 : draw_factors(config.factor, dim, rng);

    std::vector<double> v;
    switch (config.scheme) {
    case Scheme::Rand1:
        v.assign(x(donors[0]).begin(), x(donors[0]).end());
        if (n_p == 2) {
            const auto x2 = x(donors[1]);
            for (std::size_t d = 0; d < dim; ++d)
                v[d] += f1[d] * x2[d];
        } else {
            add_scaled_difference(v, f1, x(donors[1]), x(donors[2]));
        }
        break;
    case Scheme::Best1:
        v.assign(x(best).begin(), x(best).end());
        add_scaled_difference(v, f1, x(donors[0]), x(donors[1]));
        break;
    case Scheme::TargetToBest1:
        v.assign(x(target).begin(), x(target).end());
        add_scaled_difference(v, f1, x(best), x(target));
        add_scaled_difference(v, f2, x(donors[0]), x(donors[1]));
        break;
    case Scheme::Rand2:
        v.assign(x(donors[0]).begin(), x(donors[0]).end());
        add_scaled_difference(v, f1, x(donors[1]), x(donors[2]));
        add_scaled_difference(v, f2, x(donors[3]), x(donors[4]));
        break;
    case Scheme::Best2:
        v.assign(x(best).begin(), x(best).end());
        add_scaled_difference(v, f1, x(donors[0]), x(donors[1]));
        add_scaled_difference(v, f2, x(donors[2]), x(donors[3]));
        break;
    }
    return v;
}

std::vector<double> crossover(std::span<const double> parent, std::span<const double> mutant,
                              double cr, RandomStream& rng)
{
    if (parent.size() != mutant.size())
        throw std::invalid_argument("crossover: parent and mutant lengths differ");
    if (parent.empty())
        throw std::invalid_argument("crossover: empty vectors");
    if (!(cr >= 0.0 && cr <= 1.0))
        throw std::invalid_argument("crossover: cr must lie in [0, 1]");

    const std::size_t d_rand = rng.index(parent.size());
    std::vector<double> trial(parent.begin(), parent.end());
    for (std::size_t d = 0; d < parent.size(); ++d) {
        const double u = rng.unit();
        if (u <= cr || d == d_rand)
            trial[d] = mutant[d];
    }
    return trial;
}

} // namespace mdevm
