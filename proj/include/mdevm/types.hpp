#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdevm {

/// Thrown for any configuration the algorithm cannot run with: bad bounds,
/// population too small, a scheme that needs more members than exist, an
/// unknown name in a config file.
class InvalidConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The objective produced a non-finite value. Carries the offending position.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, std::vector<double> position)
        : std::runtime_error(what), position_(std::move(position))
    {
    }

    const std::vector<double>& position() const noexcept { return position_; }

private:
    std::vector<double> position_;
};

/// Box constraints, one [lower, upper] interval per decision variable.
class Bounds {
public:
    Bounds(std::vector<double> lower, std::vector<double> upper);

    static Bounds uniform(std::size_t dimension, double lower, double upper);

    std::size_t dimension() const noexcept { return lower_.size(); }
    double lower(std::size_t d) const { return lower_[d]; }
    double upper(std::size_t d) const { return upper_[d]; }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }

    bool contains(std::span<const double> x) const noexcept;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct Individual {
    std::vector<double> position;
    std::optional<double> fitness;
};

struct Population {
    std::vector<Individual> members;
    std::size_t generation = 0;

    std::size_t size() const noexcept { return members.size(); }
    std::size_t dimension() const noexcept
    {
        return members.empty() ? 0 : members.front().position.size();
    }

    /// Lowest fitness, first index on ties. Every member must be evaluated.
    std::size_t best_index() const;
    double best_fitness() const { return *members[best_index()].fitness; }
};

/// Objective to minimize. Must be safe to call concurrently when used with a
/// parallel evaluation policy.
using Objective = std::function<double(std::span<const double>)>;

/// Row-major set of points sharing one dimension.
struct PointCloud {
    std::size_t dimension = 0;
    std::vector<double> coords;

    PointCloud() = default;
    explicit PointCloud(std::size_t dim) : dimension(dim) {}

    std::size_t size() const noexcept { return dimension == 0 ? 0 : coords.size() / dimension; }
    std::span<const double> row(std::size_t i) const
    {
        return std::span<const double>(coords).subspan(i * dimension, dimension);
    }
    std::span<double> row(std::size_t i)
    {
        return std::span<double>(coords).subspan(i * dimension, dimension);
    }
    void push_back(std::span<const double> x)
    {
        if (x.size() != dimension)
            throw std::invalid_argument("PointCloud: point has wrong dimension");
        coords.insert(coords.end(), x.begin(), x.end());
    }
};

PointCloud to_cloud(const Population& pop);

} // namespace mdevm
