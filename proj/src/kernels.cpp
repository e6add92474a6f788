#include "mdevm/kernels.hpp"

#include <cblas.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace mdevm::kernels {

namespace {

EvaluationError non_finite(std::size_t i, double value, std::span<const double> x)
{
    return EvaluationError("objective returned non-finite value " + std::to_string(value)
                               + " for point " + std::to_string(i),
                           std::vector<double>(x.begin(), x.end()));
}

DistanceStats mean_and_se(std::span<const double> values, double se_scale)
{
    const auto n = static_cast<double>(values.size());
    DistanceStats out;
    if (values.empty())
        return out;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    out.mean = sum / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - out.mean) * (v - out.mean);
        out.standard_error = se_scale * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return out;
}

int resolve_threads(int threads)
{
    return threads > 0 ? threads : omp_get_max_threads();
}

} // namespace

namespace serial {

void evaluate(std::span<const std::vector<double>> points, const Objective& objective,
              std::span<double> out)
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double v = objective(points[i]);
        if (!std::isfinite(v))
            throw non_finite(i, v, points[i]);
        out[i] = v;
    }
}

DistanceStats centroid_distance(const PointCloud& cloud)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dimension;
    if (n == 0)
        return {};
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d)
            centroid[d] += cloud.row(i)[d];
    for (auto& c : centroid)
        c /= static_cast<double>(n);

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double t = cloud.row(i)[d] - centroid[d];
            acc += t * t;
        }
        r[i] = std::sqrt(acc);
    }
    return mean_and_se(r, 1.0);
}

DistanceStats pairwise_distance(const PointCloud& cloud)
{
    const std::size_t n = cloud.size();
    if (n < 2)
        throw std::invalid_argument("pairwise_distance: need at least 2 points");
    std::vector<double> h(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t d = 0; d < cloud.dimension; ++d) {
                const double t = cloud.row(i)[d] - cloud.row(j)[d];
                acc += t * t;
            }
            const double r = std::sqrt(acc);
            h[i] += r;
            h[j] += r;
        }
    }
    for (auto& v : h)
        v /= static_cast<double>(n - 1);
    return mean_and_se(h, 2.0);
}

} // namespace serial

namespace parallel {

void evaluate(std::span<const std::vector<double>> points, const Objective& objective,
              std::span<double> out, int threads)
{
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<std::exception_ptr> errors(points.size());

#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const double v = objective(points[i]);
            if (!std::isfinite(v))
                throw non_finite(static_cast<std::size_t>(i), v, points[i]);
            out[i] = v;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

DistanceStats centroid_distance(const PointCloud& cloud, int threads)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dimension;
    if (n == 0)
        return {};
    const double* x = cloud.coords.data();

    // Row-major partial sums over fixed blocks of rows, then the blocks are
    // added in order. The blocking does not depend on the thread count.
    constexpr std::size_t block = 256;
    const std::size_t blocks = (n + block - 1) / block;
    std::vector<double> partial(blocks * dim, 0.0);
    const auto sblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t b = 0; b < sblocks; ++b) {
        double* acc = partial.data() + b * dim;
        const std::size_t end = std::min(n, (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) {
            const double* row = x + i * dim;
#pragma omp simd
            for (std::size_t d = 0; d < dim; ++d)
                acc[d] += row[d];
        }
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t d = 0; d < dim; ++d)
            centroid[d] += partial[b * dim + d];
    for (auto& v : centroid)
        v /= static_cast<double>(n);

    std::vector<double> r(n);
    const double* c = centroid.data();
    const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        const double* row = x + i * dim;
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t d = 0; d < dim; ++d) {
            const double t = row[d] - c[d];
            acc += t * t;
        }
        r[i] = std::sqrt(acc);
    }
    return mean_and_se(r, 1.0);
}

DistanceStats pairwise_distance(const PointCloud& cloud, int threads)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dimension;
    if (n < 2)
        throw std::invalid_argument("pairwise_distance: need at least 2 points");

    // |a - b|^2 = |a|^2 + |b|^2 - 2 a.b, with the dot products of each tile
    // pair from one dgemm. Pairs whose squared distance is small relative to
    // the norms lose digits to cancellation and are recomputed directly.
    constexpr std::size_t tile = 512;
    constexpr double cancellation_guard = 1e-8;
    const int nthreads = resolve_threads(threads);
    const double* x = cloud.coords.data();
    const auto sn = static_cast<std::ptrdiff_t>(n);

    std::vector<double> norm(n);
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        const double* a = x + i * dim;
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t d = 0; d < dim; ++d)
            acc += a[d] * a[d];
        norm[i] = acc;
    }

    std::vector<double> h(n, 0.0), col(n, 0.0);
    std::vector<double> gram(tile * tile);
    for (std::size_t i0 = 0; i0 < n; i0 += tile) {
        const std::size_t ni = std::min(tile, n - i0);
        for (std::size_t j0 = i0; j0 < n; j0 += tile) {
            const std::size_t nj = std::min(tile, n - j0);
            cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, static_cast<int>(ni),
                        static_cast<int>(nj), static_cast<int>(dim), 1.0, x + i0 * dim,
                        static_cast<int>(dim), x + j0 * dim, static_cast<int>(dim), 0.0,
                        gram.data(), static_cast<int>(nj));

            // Rows of the tile go to h, columns to col; each is written by
            // one thread only, so the sums do not depend on scheduling.
#pragma omp parallel for schedule(static) num_threads(nthreads)
            for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(ni); ++si) {
                const std::size_t i = i0 + static_cast<std::size_t>(si);
                double* g = gram.data() + static_cast<std::size_t>(si) * nj;
                double row_sum = 0.0;
                for (std::size_t sj = (i0 == j0 ? si + 1 : 0); sj < nj; ++sj) {
                    const std::size_t j = j0 + sj;
                    double d2 = norm[i] + norm[j] - 2.0 * g[sj];
                    if (d2 <= cancellation_guard * (norm[i] + norm[j])) {
                        const double* a = x + i * dim;
                        const double* b = x + j * dim;
                        d2 = 0.0;
                        for (std::size_t d = 0; d < dim; ++d) {
                            const double t = a[d] - b[d];
                            d2 += t * t;
                        }
                    }
                    const double r = std::sqrt(d2);
                    row_sum += r;
                    g[sj] = r;
                }
                h[i] += row_sum;
            }
#pragma omp parallel for schedule(static) num_threads(nthreads)
            for (std::ptrdiff_t sj = 0; sj < static_cast<std::ptrdiff_t>(nj); ++sj) {
                const std::size_t j = j0 + static_cast<std::size_t>(sj);
                const std::size_t rows = i0 == j0 ? static_cast<std::size_t>(sj) : ni;
                double sum = 0.0;
                for (std::size_t si = 0; si < rows; ++si)
                    sum += gram[si * nj + static_cast<std::size_t>(sj)];
                col[j] += sum;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        h[i] = (h[i] + col[i]) / static_cast<double>(n - 1);
    return mean_and_se(h, 2.0);
}

} // namespace parallel

} // namespace mdevm::kernels
