#include "mdevm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace mdevm::stats {

std::string_view symbol(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Better: return "+";
    case Verdict::Equal: return "=";
    case Verdict::Worse: return "-";
    }
    return "?";
}

Verdict parse_verdict(std::string_view s)
{
    if (s == "+") return Verdict::Better;
    if (s == "=") return Verdict::Equal;
    if (s == "-") return Verdict::Worse;
    throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

namespace {

// Doubled mid-ranks (integers) of the pooled sample, plus the tie term
// sum(t^3 - t) over tie groups.
struct PooledRanks {
    std::vector<long long> doubled;
    double tie_term = 0.0;
};

PooledRanks pooled_ranks(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size() + b.size();
    std::vector<double> values;
    values.reserve(n);
    values.insert(values.end(), a.begin(), a.end());
    values.insert(values.end(), b.begin(), b.end());
    for (double v : values)
        if (std::isnan(v))
            throw std::invalid_argument("rank-sum: NaN in sample");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    PooledRanks out;
    out.doubled.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        const auto first = static_cast<long long>(i + 1);
        const auto last = static_cast<long long>(j + 1);
        for (std::size_t k = i; k <= j; ++k)
            out.doubled[order[k]] = first + last;
        const auto t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

void check_samples(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("rank-sum: each sample needs at least 2 values");
}

} // namespace

std::vector<double> midranks(std::span<const double> a, std::span<const double> b)
{
    const auto ranks = pooled_ranks(a, b);
    std::vector<double> out(ranks.doubled.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<double>(ranks.doubled[i]) / 2.0;
    return out;
}

double u_statistic(std::span<const double> a, std::span<const double> b)
{
    const auto ranks = pooled_ranks(a, b);
    long long doubled_sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        doubled_sum += ranks.doubled[i];
    const auto na = static_cast<double>(a.size());
    return static_cast<double>(doubled_sum) / 2.0 - na * (na + 1.0) / 2.0;
}

double exact_p_value(std::span<const double> a, std::span<const double> b)
{
    check_samples(a, b);
    const auto ranks = pooled_ranks(a, b);
    const std::size_t na = a.size();
    const std::size_t n = ranks.doubled.size();

    // Work with the smaller sample; the two-sided p-value is symmetric.
    const bool use_a = na <= b.size();
    const std::size_t k = use_a ? na : b.size();
    long long observed = 0;
    for (std::size_t i = 0; i < n; ++i)
        if ((i < na) == use_a)
            observed += ranks.doubled[i];

    // No k-subset can exceed the sum of the k largest ranks.
    std::vector<long long> sorted = ranks.doubled;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    long long max_sum = 0;
    for (std::size_t i = 0; i < k; ++i)
        max_sum += sorted[i];

    // counts[j][s]: number of j-subsets of the items seen so far with doubled sum s.
    const auto width = static_cast<std::size_t>(max_sum + 1);
    std::vector<double> counts((k + 1) * width, 0.0);
    counts[0] = 1.0;
    long long reach = 0;
    for (std::size_t item = 0; item < n; ++item) {
        const long long r = ranks.doubled[item];
        reach = std::min(reach + r, max_sum);
        const std::size_t top = std::min(k, item + 1);
        for (std::size_t j = top; j >= 1; --j) {
            double* dst = counts.data() + j * width;
            const double* src = counts.data() + (j - 1) * width;
            for (long long s = reach; s >= r; --s)
                dst[s] += src[s - r];
        }
    }

    const double* dist = counts.data() + k * width;
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (long long s = 0; s <= max_sum; ++s) {
        const double c = dist[s];
        total += c;
        if (s <= observed)
            lower += c;
        if (s >= observed)
            upper += c;
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

double normal_p_value(std::span<const double> a, std::span<const double> b)
{
    check_samples(a, b);
    const auto ranks = pooled_ranks(a, b);
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    const double n = na + nb;
    long long doubled_sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        doubled_sum += ranks.doubled[i];
    const double u = static_cast<double>(doubled_sum) / 2.0 - na * (na + 1.0) / 2.0;
    const double mu = na * nb / 2.0;
    const double var = na * nb / 12.0 * ((n + 1.0) - ranks.tie_term / (n * (n - 1.0)));
    if (!(var > 0.0))
        return 1.0;
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

RankSumResult rank_sum(std::span<const double> a, std::span<const double> b, double alpha,
                       Method method)
{
    check_samples(a, b);
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::invalid_argument("rank-sum: alpha must lie in (0, 0.5]");

    RankSumResult r;
    r.u = u_statistic(a, b);
    r.exact = method == Method::Exact
              || (method == Method::Auto && std::min(a.size(), b.size()) < 10);
    r.p_value = r.exact ? exact_p_value(a, b) : normal_p_value(a, b);
    const double mu = static_cast<double>(a.size()) * static_cast<double>(b.size()) / 2.0;
    if (r.p_value <= alpha && r.u != mu)
        r.verdict = r.u < mu ? Verdict::Better : Verdict::Worse;
    return r;
}

Verdict rank_sum_test(std::span<const double> a, std::span<const double> b, double alpha)
{
    return rank_sum(a, b, alpha).verdict;
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty())
        throw std::invalid_argument("quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

double median(std::vector<double> v)
{
    return quantile(std::move(v), 0.5);
}

ComparisonReport summarize(const SampleSet& reference, const SampleSet& opponent, double alpha,
                           std::string reference_name, std::string opponent_name)
{
    std::vector<std::string> missing_opp, missing_ref;
    for (const auto& [name, _] : reference)
        if (!opponent.contains(name))
            missing_opp.push_back(name);
    for (const auto& [name, _] : opponent)
        if (!reference.contains(name))
            missing_ref.push_back(name);
    if (!missing_opp.empty() || !missing_ref.empty()) {
        std::string msg = "function sets differ;";
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& x : v)
                s += (s.empty() ? "" : ", ") + x;
            return s;
        };
        if (!missing_opp.empty())
            msg += " missing from opponent: " + join(missing_opp) + ";";
        if (!missing_ref.empty())
            msg += " missing from reference: " + join(missing_ref) + ";";
        throw std::invalid_argument(msg);
    }

    ComparisonReport report;
    report.reference = std::move(reference_name);
    report.opponent = std::move(opponent_name);
    report.alpha = alpha;
    for (const auto& [name, a] : reference) {
        const auto& b = opponent.at(name);
        if (a.size() != b.size())
            throw std::invalid_argument("run counts differ for function " + name);
        const auto r = rank_sum(a, b, alpha);
        report.per_function.push_back({name, r.verdict, r.p_value, median(a), median(b)});
        switch (r.verdict) {
        case Verdict::Better: ++report.plus; break;
        case Verdict::Equal: ++report.equal; break;
        case Verdict::Worse: ++report.minus; break;
        }
    }
    return report;
}

nlohmann::json ComparisonReport::to_json() const
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : per_function) {
        rows.push_back({{"function", f.function},
                        {"outcome", symbol(f.verdict)},
                        {"p_value", f.p_value},
                        {"median_reference", f.median_reference},
                        {"median_opponent", f.median_opponent}});
    }
    return {{"reference", reference},
            {"opponent", opponent},
            {"alpha", alpha},
            {"per_function", rows},
            {"counts", {{"plus", plus}, {"equal", equal}, {"minus", minus}}}};
}

ComparisonReport ComparisonReport::from_json(const nlohmann::json& j)
{
    ComparisonReport r;
    r.reference = j.at("reference").get<std::string>();
    r.opponent = j.at("opponent").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    for (const auto& row : j.at("per_function")) {
        r.per_function.push_back({row.at("function").get<std::string>(),
                                  parse_verdict(row.at("outcome").get<std::string>()),
                                  row.at("p_value").get<double>(),
                                  row.at("median_reference").get<double>(),
                                  row.at("median_opponent").get<double>()});
    }
    r.plus = j.at("counts").at("plus").get<std::size_t>();
    r.equal = j.at("counts").at("equal").get<std::size_t>();
    r.minus = j.at("counts").at("minus").get<std::size_t>();
    return r;
}

} // namespace mdevm::stats
