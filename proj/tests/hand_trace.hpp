#pragma once

// Replays one generation of DE/Rand/1 with vector-random factors, binomial
// crossover, bound repair and greedy selection from a tape of recorded unit
// draws. Written as straight-line arithmetic so it can serve as an oracle
// for the engine.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct TraceResult {
    std::vector<std::vector<double>> positions;
    std::vector<double> fitness;
    std::size_t draws_used = 0;
};

inline double sphere(const std::vector<double>& x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

inline TraceResult hand_trace_rand1(const std::vector<std::vector<double>>& x,
                                    const std::vector<double>& fx, const std::vector<double>& tape,
                                    double f_lo, double f_hi, double cr, double lower, double upper)
{
    const std::size_t n_p = x.size();
    const std::size_t dim = x[0].size();
    std::size_t at = 0;
    auto next = [&] {
        if (at >= tape.size())
            throw std::runtime_error("hand trace ran past the tape");
        return tape[at++];
    };
    // k-th index in [0, n): ceil(u n) - 1 with u in (0, 1].
    auto pick = [](double u, std::size_t n) {
        return static_cast<std::size_t>(std::ceil(u * static_cast<double>(n))) - 1;
    };

    std::vector<std::vector<double>> trial(n_p, std::vector<double>(dim));
    for (std::size_t i = 0; i < n_p; ++i) {
        std::vector<std::size_t> pool;
        for (std::size_t j = 0; j < n_p; ++j)
            if (j != i)
                pool.push_back(j);
        for (std::size_t j = 0; j < 3; ++j)
            std::swap(pool[j], pool[j + pick(next(), pool.size() - j)]);
        const auto& a = x[pool[0]];
        const auto& b = x[pool[1]];
        const auto& c = x[pool[2]];

        std::vector<double> v(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const double f = f_lo + next() * (f_hi - f_lo);
            v[d] = a[d] + f * (b[d] - c[d]);
        }

        const std::size_t d_rand = pick(next(), dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const double u = next();
            trial[i][d] = (u <= cr || d == d_rand) ? v[d] : x[i][d];
        }
        for (std::size_t d = 0; d < dim; ++d)
            if (trial[i][d] < lower || trial[i][d] > upper)
                trial[i][d] = lower + next() * (upper - lower);
    }

    TraceResult out;
    for (std::size_t i = 0; i < n_p; ++i) {
        const double ft = sphere(trial[i]);
        if (ft <= fx[i]) {
            out.positions.push_back(trial[i]);
            out.fitness.push_back(ft);
        } else {
            out.positions.push_back(x[i]);
            out.fitness.push_back(fx[i]);
        }
    }
    out.draws_used = at;
    return out;
}

} // namespace oracle
