#pragma once

// Data-parallel kernels. Each kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; the tests
// hold the two against each other and bench/ measures the difference.

#include <cstddef>
#include <span>
#include <vector>

#include "mdevm/types.hpp"

namespace mdevm::kernels {

enum class Backend { Serial, Parallel };

/// Mean of a per-point distance statistic and its standard error.
struct DistanceStats {
    double mean = 0.0;
    double standard_error = 0.0;
};

namespace serial {

/// out[i] = objective(points[i]). Throws EvaluationError for the first
/// (lowest index) point whose value is not finite.
void evaluate(std::span<const std::vector<double>> points, const Objective& objective,
              std::span<double> out);

/// Mean Euclidean distance to the centroid. The standard error is that of
/// the per-point distances.
DistanceStats centroid_distance(const PointCloud& cloud);

/// Mean Euclidean distance over ordered pairs i != j. The standard error is
/// the first-order U-statistic estimate 2 sd(h) / sqrt(n), where h_i is the
/// mean distance from point i to the others.
DistanceStats pairwise_distance(const PointCloud& cloud);

} // namespace serial

namespace parallel {

/// `threads == 0` uses the OpenMP runtime default.
void evaluate(std::span<const std::vector<double>> points, const Objective& objective,
              std::span<double> out, int threads = 0);

DistanceStats centroid_distance(const PointCloud& cloud, int threads = 0);

/// Tiled Gram-matrix formulation on BLAS dgemm. Deterministic for a fixed
/// thread count; agrees with the serial kernel to rounding (about 1e-12
/// relative), near-duplicate pairs are recomputed exactly.
DistanceStats pairwise_distance(const PointCloud& cloud, int threads = 0);

} // namespace parallel

inline DistanceStats centroid_distance(const PointCloud& cloud, Backend backend)
{
    return backend == Backend::Serial ? serial::centroid_distance(cloud)
                                      : parallel::centroid_distance(cloud);
}

inline DistanceStats pairwise_distance(const PointCloud& cloud, Backend backend)
{
    return backend == Backend::Serial ? serial::pairwise_distance(cloud)
                                      : parallel::pairwise_distance(cloud);
}

} // namespace mdevm::kernels
