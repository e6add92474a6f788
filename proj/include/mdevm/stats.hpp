#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mdevm::stats {

/// Outcome for the reference sample `a` against `b`, lower being better.
/// Rendered as "+", "=", "-".
enum class Verdict { Better, Equal, Worse };

std::string_view symbol(Verdict v) noexcept;
Verdict parse_verdict(std::string_view s);

/// Mid-ranks (1-based) of the pooled sample a ++ b.
std::vector<double> midranks(std::span<const double> a, std::span<const double> b);

/// Mann-Whitney U of `a`: R_a - n_a (n_a + 1) / 2.
double u_statistic(std::span<const double> a, std::span<const double> b);

/// Two-sided p-value from the exact permutation distribution of the rank sum
/// of `a`, conditional on the observed tie pattern. Counts are accumulated
/// by dynamic programming over doubled mid-ranks.
double exact_p_value(std::span<const double> a, std::span<const double> b);

/// Two-sided p-value from the normal approximation with tie-corrected
/// variance and a 0.5 continuity correction. Returns 1 when every value ties.
double normal_p_value(std::span<const double> a, std::span<const double> b);

enum class Method { Auto, Exact, Normal };

struct RankSumResult {
    double u = 0.0;
    double p_value = 1.0;
    bool exact = false;
    Verdict verdict = Verdict::Equal;
};

/// Auto uses the exact path when either sample has fewer than 10 values and
/// the normal approximation otherwise. Significant when p <= alpha; the
/// direction comes from U against its null mean n_a n_b / 2.
///
/// Throws std::invalid_argument unless both samples have >= 2 values and
/// alpha lies in (0, 0.5].
RankSumResult rank_sum(std::span<const double> a, std::span<const double> b, double alpha,
                       Method method = Method::Auto);

Verdict rank_sum_test(std::span<const double> a, std::span<const double> b, double alpha);

struct FunctionOutcome {
    std::string function;
    Verdict verdict = Verdict::Equal;
    double p_value = 1.0;
    double median_reference = 0.0;
    double median_opponent = 0.0;
};

struct ComparisonReport {
    std::string reference;
    std::string opponent;
    double alpha = 0.05;
    std::vector<FunctionOutcome> per_function;
    std::size_t plus = 0;
    std::size_t equal = 0;
    std::size_t minus = 0;

    nlohmann::json to_json() const;
    static ComparisonReport from_json(const nlohmann::json& j);
};

/// Per-function final-error samples keyed by function name.
using SampleSet = std::map<std::string, std::vector<double>>;

/// Runs `rank_sum_test` per function and tallies +/=/-. Throws
/// std::invalid_argument when the function sets differ (message lists the
/// functions missing on each side) or run counts differ for a function.
ComparisonReport summarize(const SampleSet& reference, const SampleSet& opponent, double alpha,
                           std::string reference_name = "reference",
                           std::string opponent_name = "opponent");

double median(std::vector<double> v);

/// Linear-interpolation quantile (R type 7).
double quantile(std::vector<double> v, double q);

} // namespace mdevm::stats
