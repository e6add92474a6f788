#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdevm/kernels.hpp"

using namespace mdevm;

namespace {

PointCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed, double spread = 1.0)
{
    std::mt19937_64 g(seed);
    std::normal_distribution<double> z;
    PointCloud c(dim);
    for (std::size_t i = 0; i < n * dim; ++i)
        c.coords.push_back(spread * z(g));
    return c;
}

void expect_close(kernels::DistanceStats a, kernels::DistanceStats b, double rel)
{
    EXPECT_NEAR(a.mean, b.mean, rel * std::abs(b.mean));
    EXPECT_NEAR(a.standard_error, b.standard_error, 1e-9 * std::abs(b.standard_error) + 1e-14);
}

} // namespace

TEST(Kernels, CentroidSerialMatchesParallel)
{
    for (std::size_t n : {1u, 2u, 17u, 1000u})
        for (std::size_t dim : {1u, 3u, 64u}) {
            const auto c = random_cloud(n, dim, n * 31 + dim);
            expect_close(kernels::parallel::centroid_distance(c), kernels::serial::centroid_distance(c), 1e-13);
        }
}

TEST(Kernels, PairwiseSerialMatchesParallel)
{
    // 700 points spans two dgemm tiles.
    for (std::size_t n : {2u, 3u, 33u, 700u})
        for (std::size_t dim : {1u, 5u, 200u}) {
            const auto c = random_cloud(n, dim, n * 7 + dim, 10.0);
            expect_close(kernels::parallel::pairwise_distance(c), kernels::serial::pairwise_distance(c), 1e-12);
        }
}

TEST(Kernels, PairwiseHandlesDuplicatesExactly)
{
    PointCloud c(4);
    for (int i = 0; i < 50; ++i)
        c.push_back(std::vector<double>{1e3, -2e3, 5.0, 7.0});
    EXPECT_EQ(kernels::parallel::pairwise_distance(c).mean, 0.0);
    EXPECT_EQ(kernels::serial::pairwise_distance(c).mean, 0.0);

    // Pairs far smaller than the norms: recomputed directly, no cancellation noise.
    c.push_back(std::vector<double>{1e3 + 1e-6, -2e3, 5.0, 7.0});
    const auto s = kernels::serial::pairwise_distance(c);
    const auto p = kernels::parallel::pairwise_distance(c);
    EXPECT_NEAR(p.mean, s.mean, 1e-12 * s.mean);
}

TEST(Kernels, ThreadCountDoesNotChangeResults)
{
    const auto c = random_cloud(600, 20, 5);
    const auto one = kernels::parallel::pairwise_distance(c, 1);
    const auto four = kernels::parallel::pairwise_distance(c, 4);
    EXPECT_EQ(one.mean, four.mean);
    EXPECT_EQ(one.standard_error, four.standard_error);
    EXPECT_EQ(kernels::parallel::centroid_distance(c, 1).mean,
              kernels::parallel::centroid_distance(c, 3).mean);
}

TEST(Kernels, PairwiseNeedsTwoPoints)
{
    const auto c = random_cloud(1, 3, 1);
    EXPECT_THROW(kernels::serial::pairwise_distance(c), std::invalid_argument);
    EXPECT_THROW(kernels::parallel::pairwise_distance(c), std::invalid_argument);
}

TEST(Kernels, EvaluateSerialMatchesParallelAndReportsLowestFailure)
{
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 100; ++i)
        pts.push_back({static_cast<double>(i), 1.0});
    const Objective f = [](std::span<const double> x) { return x[0] * x[0] + x[1]; };
    std::vector<double> a(100), b(100);
    kernels::serial::evaluate(pts, f, a);
    kernels::parallel::evaluate(pts, f, b, 4);
    EXPECT_EQ(a, b);

    const Objective bad = [](std::span<const double> x) {
        return x[0] >= 40.0 ? std::numeric_limits<double>::infinity() : 0.0;
    };
    try {
        kernels::parallel::evaluate(pts, bad, b, 4);
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.position()[0], 40.0);
    }
}

TEST(Kernels, StandardErrorShrinksWithSamples)
{
    const auto small = kernels::serial::centroid_distance(random_cloud(100, 3, 1));
    const auto large = kernels::serial::centroid_distance(random_cloud(10000, 3, 1));
    EXPECT_GT(small.standard_error, 5.0 * large.standard_error);
    EXPECT_NEAR(large.mean, small.mean, 5.0 * small.standard_error);
}
