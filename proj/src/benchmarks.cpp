#include "mdevm/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mdevm/random.hpp"

namespace mdevm {

std::string_view to_string(Category c) noexcept
{
    switch (c) {
    case Category::UniModal: return "uni-modal";
    case Category::MultiModal: return "multi-modal";
    case Category::Composite: return "composite";
    }
    return "?";
}

namespace functions {

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

double ellipsoid(std::span<const double> x)
{
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = n > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        s += std::pow(10.0, e) * x[i] * x[i];
    }
    return s;
}

double rosenbrock(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double rastrigin(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
    return s;
}

double ackley(std::span<const double> x)
{
    const auto n = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * std::numbers::pi * v);
    }
    return 20.0 + std::numbers::e - 20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n);
}

double griewank(std::span<const double> x)
{
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i];
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s / 4000.0 - p + 1.0;
}

double schwefel(std::span<const double> x)
{
    static const double c = kSchwefelOptimum * std::sin(std::sqrt(kSchwefelOptimum));
    double s = 0.0;
    for (double v : x)
        s += c - v * std::sin(std::sqrt(std::abs(v)));
    return s;
}

} // namespace functions

namespace {

using BaseFn = double (*)(std::span<const double>);

BaseFn lookup_base(std::string_view name)
{
    if (name == "sphere") return functions::sphere;
    if (name == "ellipsoid") return functions::ellipsoid;
    if (name == "rosenbrock") return functions::rosenbrock;
    if (name == "rastrigin") return functions::rastrigin;
    if (name == "ackley") return functions::ackley;
    if (name == "griewank") return functions::griewank;
    if (name == "schwefel") return functions::schwefel;
    throw InvalidConfiguration("unknown base function '" + std::string(name) + "'");
}

// Base function moved so that its minimum sits at z = 0.
double base_at_origin(std::string_view name, std::vector<double>& z)
{
    if (name == "rosenbrock")
        for (auto& v : z)
            v += 1.0;
    return lookup_base(name)(z);
}

struct ComponentRecipe {
    const char* base;
    double scale;
    double sigma;
    double lambda;
    double bias;
};

constexpr ComponentRecipe kComposite1[] = {
    {"rosenbrock", 2.048 / 100.0, 10.0, 1.0, 0.0},
    {"ellipsoid", 1.0, 20.0, 1e-6, 100.0},
    {"rastrigin", 5.12 / 100.0, 30.0, 1.0, 200.0},
};

constexpr ComponentRecipe kComposite2[] = {
    {"rastrigin", 5.12 / 100.0, 10.0, 1.0, 0.0},
    {"griewank", 600.0 / 100.0, 20.0, 1.0, 100.0},
    {"ackley", 32.768 / 100.0, 30.0, 1.0, 200.0},
};

} // namespace

double CompositeSpec::operator()(std::span<const double> x) const
{
    const std::size_t dim = dimension;
    const std::size_t m = components.size();
    std::vector<double> weight(m, 0.0);
    std::vector<double> value(m, 0.0);
    std::vector<double> diff(dim), z(dim);

    std::size_t exact = m;
    for (std::size_t k = 0; k < m; ++k) {
        const auto& c = components[k];
        double dist2 = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            diff[d] = x[d] - c.shift[d];
            dist2 += diff[d] * diff[d];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                acc += c.rotation[r * dim + d] * diff[d];
            z[r] = c.scale * acc;
        }
        value[k] = c.lambda * base_at_origin(c.base, z) + c.bias;
        if (dist2 == 0.0) {
            if (exact == m)
                exact = k;
        } else {
            weight[k] = std::exp(-dist2 / (2.0 * static_cast<double>(dim) * c.sigma * c.sigma))
                        / std::sqrt(dist2);
        }
    }
    if (exact != m)
        return value[exact];

    double wsum = 0.0;
    for (double w : weight)
        wsum += w;
    double f = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        f += (wsum > 0.0 ? weight[k] / wsum : 1.0 / static_cast<double>(m)) * value[k];
    return f;
}

nlohmann::json CompositeSpec::to_json() const
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : components) {
        comps.push_back({{"base", c.base},
                         {"shift", c.shift},
                         {"rotation", c.rotation},
                         {"sigma", c.sigma},
                         {"lambda", c.lambda},
                         {"bias", c.bias},
                         {"scale", c.scale}});
    }
    return {{"dimension", dimension}, {"components", comps}};
}

std::vector<double> random_rotation(std::size_t dim, std::uint64_t seed)
{
    RandomStream rng(seed);
    std::vector<double> m(dim * dim);
    for (auto& v : m)
        v = rng.normal();
    // Modified Gram-Schmidt over rows.
    for (std::size_t r = 0; r < dim; ++r) {
        double* row = m.data() + r * dim;
        for (std::size_t q = 0; q < r; ++q) {
            const double* prev = m.data() + q * dim;
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d)
                dot += row[d] * prev[d];
            for (std::size_t d = 0; d < dim; ++d)
                row[d] -= dot * prev[d];
        }
        double norm = 0.0;
        for (std::size_t d = 0; d < dim; ++d)
            norm += row[d] * row[d];
        norm = std::sqrt(norm);
        for (std::size_t d = 0; d < dim; ++d)
            row[d] /= norm;
    }
    return m;
}

CompositeSpec make_composite(int which, std::size_t dim, std::uint64_t seed)
{
    std::span<const ComponentRecipe> recipe;
    if (which == 1)
        recipe = kComposite1;
    else if (which == 2)
        recipe = kComposite2;
    else
        throw InvalidConfiguration("composite index must be 1 or 2");

    CompositeSpec spec;
    spec.dimension = dim;
    RandomStream rng(mix64(seed ^ static_cast<std::uint64_t>(which)));
    for (std::size_t k = 0; k < recipe.size(); ++k) {
        CompositeComponent c;
        c.base = recipe[k].base;
        c.scale = recipe[k].scale;
        c.sigma = recipe[k].sigma;
        c.lambda = recipe[k].lambda;
        c.bias = recipe[k].bias;
        c.shift.resize(dim);
        for (auto& v : c.shift)
            v = rng.uniform(-80.0, 80.0);
        c.rotation = random_rotation(dim, rng.substream(k).seed());
        spec.components.push_back(std::move(c));
    }
    return spec;
}

BenchmarkFunction::BenchmarkFunction(std::string name, Category category, Bounds bounds,
                                     double optimum_value, std::vector<double> optimizer,
                                     std::function<double(std::span<const double>)> f,
                                     std::shared_ptr<const CompositeSpec> composite)
    : name_(std::move(name)), category_(category), bounds_(std::move(bounds)),
      optimum_value_(optimum_value), optimizer_(std::move(optimizer)), f_(std::move(f)),
      composite_(std::move(composite))
{
}

double BenchmarkFunction::evaluate(std::span<const double> x) const
{
    if (x.size() != dimension())
        throw std::invalid_argument(name_ + ": expected " + std::to_string(dimension())
                                    + " coordinates, got " + std::to_string(x.size()));
    const double v = f_(x);
    if (!std::isfinite(v))
        throw EvaluationError(name_ + ": non-finite value", std::vector<double>(x.begin(), x.end()));
    return v;
}

std::vector<std::string> function_names()
{
    return {"sphere",   "ellipsoid", "rosenbrock",    "rastrigin",    "ackley",
            "griewank", "schwefel",  "composition_1", "composition_2"};
}

BenchmarkFunction make_function(std::string_view name, std::size_t dim, std::uint64_t seed)
{
    if (dim == 0)
        throw InvalidConfiguration("dimension must be at least 1");
    const auto box = Bounds::uniform(dim, -100.0, 100.0);
    const std::vector<double> origin(dim, 0.0);
    auto plain = [&](Category cat, BaseFn fn, std::vector<double> opt, Bounds b) {
        return BenchmarkFunction(std::string(name), cat, std::move(b), 0.0, std::move(opt), fn);
    };

    if (name == "sphere") return plain(Category::UniModal, functions::sphere, origin, box);
    if (name == "ellipsoid") return plain(Category::UniModal, functions::ellipsoid, origin, box);
    if (name == "rosenbrock")
        return plain(Category::MultiModal, functions::rosenbrock, std::vector<double>(dim, 1.0), box);
    if (name == "rastrigin") return plain(Category::MultiModal, functions::rastrigin, origin, box);
    if (name == "ackley") return plain(Category::MultiModal, functions::ackley, origin, box);
    if (name == "griewank") return plain(Category::MultiModal, functions::griewank, origin, box);
    if (name == "schwefel")
        return plain(Category::MultiModal, functions::schwefel,
                     std::vector<double>(dim, functions::kSchwefelOptimum),
                     Bounds::uniform(dim, -500.0, 500.0));
    if (name == "composition_1" || name == "composition_2") {
        auto spec = std::make_shared<const CompositeSpec>(
            make_composite(name == "composition_1" ? 1 : 2, dim, seed));
        auto opt = spec->components.front().shift;
        return BenchmarkFunction(std::string(name), Category::Composite, box, 0.0, std::move(opt),
                                 [spec](std::span<const double> x) { return (*spec)(x); }, spec);
    }
    throw InvalidConfiguration("unknown function '" + std::string(name) + "'");
}

std::vector<BenchmarkFunction> suite(std::size_t dim, std::uint64_t seed)
{
    std::vector<BenchmarkFunction> out;
    for (const auto& n : function_names())
        out.push_back(make_function(n, dim, seed));
    return out;
}

} // namespace mdevm
