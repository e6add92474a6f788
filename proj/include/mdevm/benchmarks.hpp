#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdevm/types.hpp"

namespace mdevm {

enum class Category { UniModal, MultiModal, Composite };

std::string_view to_string(Category c) noexcept;

/// Classical analytic test functions. All are minimized, all have optimum
/// value 0. Inputs are used as-is (no shift, no rotation).
namespace functions {

double sphere(std::span<const double> x);
/// sum 10^(6 i / (D - 1)) x_i^2
double ellipsoid(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double rastrigin(std::span<const double> x);
double ackley(std::span<const double> x);
double griewank(std::span<const double> x);
/// sum (c - x_i sin(sqrt|x_i|)) with c chosen so the value at
/// x_i = kSchwefelOptimum is exactly 0.
double schwefel(std::span<const double> x);

inline constexpr double kSchwefelOptimum = 420.9687462275036;

} // namespace functions

/// Shifted, rotated, weighted composition of base functions:
///
///   F(x) = sum_k w_k(x) (lambda_k g_k(scale_k M_k (x - o_k)) + bias_k)
///   w_k  = exp(-|x - o_k|^2 / (2 D sigma_k^2)) / |x - o_k|, normalized to sum 1
///
/// with w = indicator(k) when x == o_k. Component 0 has bias 0 so F(o_0) = 0
/// is the global minimum.
struct CompositeComponent {
    std::string base;            // name of a function in `functions`
    std::vector<double> shift;   // o_k, length D
    std::vector<double> rotation; // M_k, row-major D x D, orthogonal
    double sigma = 10.0;
    double lambda = 1.0;
    double bias = 0.0;
    double scale = 1.0;
};

struct CompositeSpec {
    std::size_t dimension = 0;
    std::vector<CompositeComponent> components;

    double operator()(std::span<const double> x) const;
    nlohmann::json to_json() const;
};

/// Builds composite number `which` (1 or 2) for dimension `dim`. Shifts and
/// rotations come from `seed`.
CompositeSpec make_composite(int which, std::size_t dim, std::uint64_t seed);

/// Row-major random orthogonal matrix (Gram-Schmidt on Gaussian entries).
std::vector<double> random_rotation(std::size_t dim, std::uint64_t seed);

class BenchmarkFunction {
public:
    BenchmarkFunction(std::string name, Category category, Bounds bounds, double optimum_value,
                      std::vector<double> optimizer,
                      std::function<double(std::span<const double>)> f,
                      std::shared_ptr<const CompositeSpec> composite = nullptr);

    const std::string& name() const noexcept { return name_; }
    Category category() const noexcept { return category_; }
    std::size_t dimension() const noexcept { return bounds_.dimension(); }
    const Bounds& bounds() const noexcept { return bounds_; }
    double optimum_value() const noexcept { return optimum_value_; }
    const std::vector<double>& optimizer() const noexcept { return optimizer_; }

    /// Checked evaluation: throws std::invalid_argument on a length mismatch
    /// and EvaluationError on a non-finite result.
    double evaluate(std::span<const double> x) const;
    double operator()(std::span<const double> x) const { return evaluate(x); }

    /// Composite data (shifts, rotations, weights) for persistence; null for
    /// plain functions.
    const CompositeSpec* composite() const noexcept { return composite_.get(); }

private:
    std::string name_;
    Category category_;
    Bounds bounds_;
    double optimum_value_;
    std::vector<double> optimizer_;
    std::function<double(std::span<const double>)> f_;
    std::shared_ptr<const CompositeSpec> composite_;
};

/// Names in registry order.
std::vector<std::string> function_names();

/// Throws InvalidConfiguration for unknown names. `seed` only matters for
/// composites.
BenchmarkFunction make_function(std::string_view name, std::size_t dim, std::uint64_t seed);

/// Every registered function at dimension `dim`.
std::vector<BenchmarkFunction> suite(std::size_t dim, std::uint64_t seed);

} // namespace mdevm
