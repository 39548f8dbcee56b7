#include "novelty/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace novelty {

namespace {

struct Ranked {
    std::vector<std::int64_t> doubled_ranks; // 2 * midrank, pooled order
    std::vector<char> first;                 // 1 if the pooled value came from the first sample
    double tie_term = 0.0;                   // sum over tie groups of t^3 - t
};

Ranked rank_pooled(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, char>> pooled;
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, 1);
    for (double v : b) pooled.emplace_back(v, 0);
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    Ranked r;
    r.doubled_ranks.resize(n);
    r.first.resize(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        // positions i..j-1 share the midrank ((i+1) + j) / 2
        const auto doubled = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            r.doubled_ranks[t] = doubled;
            r.first[t] = pooled[t].second;
        }
        const double t = static_cast<double>(j - i);
        r.tie_term += t * t * t - t;
        i = j;
    }
    return r;
}

void check_sample(std::span<const double> s, const char* name) {
    if (s.empty()) throw MwuError(std::string(name) + " sample is empty");
    if (!std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); }))
        throw MwuError(std::string(name) + " sample has non-finite values");
}

// Two-sided exact p. Enumerates the distribution of the doubled rank sum of
// the smaller group by dynamic programming over the pooled doubled ranks.
double exact_p(const Ranked& ranked, std::size_t n1, std::size_t n2, double u1) {
    const bool first_smaller = n1 <= n2;
    const std::size_t m = first_smaller ? n1 : n2;
    const std::size_t n = n1 + n2;

    std::int64_t max_sum = 0;
    {
        std::vector<std::int64_t> sorted = ranked.doubled_ranks;
        std::sort(sorted.rbegin(), sorted.rend());
        for (std::size_t i = 0; i < m; ++i) max_sum += sorted[i];
    }

    // ways[j][s]: subsets of size j with doubled rank sum s. Counts stay below
    // C(n, m) <= C(40, 20) < 2^53 under the default threshold, so doubles are
    // exact.
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(ranked.doubled_ranks[i]);
        for (std::size_t j = std::min(m, i + 1); j >= 1; --j) {
            auto& dst = ways[j];
            const auto& src = ways[j - 1];
            for (std::size_t s = static_cast<std::size_t>(max_sum); s >= r; --s) {
                dst[s] += src[s - r];
                if (s == r) break;
            }
        }
    }

    // With doubled quantities: 2U = S - m(m+1) and 2 * mean = n1 * n2.
    const auto nn = static_cast<std::int64_t>(n1 * n2);
    const auto m_term = static_cast<std::int64_t>(m * (m + 1));
    const auto u_small_doubled = static_cast<std::int64_t>(std::llround(2.0 * (first_smaller ? u1 : nn - u1)));
    const std::int64_t observed = std::llabs(u_small_doubled - nn);

    double total = 0.0, extreme = 0.0;
    for (std::int64_t s = 0; s <= max_sum; ++s) {
        const double w = ways[m][static_cast<std::size_t>(s)];
        if (w == 0.0) continue;
        total += w;
        if (std::llabs((s - m_term) - nn) >= observed) extreme += w;
    }
    return std::clamp(extreme / total, 0.0, 1.0);
}

} // namespace

std::string_view mwu_method_name(MwuMethod m) {
    return m == MwuMethod::exact ? "exact" : "normal-approx-tie-corrected";
}

TestResult mann_whitney_u(std::span<const double> first, std::span<const double> second, const MwuOptions& options) {
    check_sample(first, "first");
    check_sample(second, "second");

    const std::size_t n1 = first.size(), n2 = second.size();
    const Ranked ranked = rank_pooled(first, second);

    std::int64_t r1_doubled = 0;
    for (std::size_t i = 0; i < ranked.doubled_ranks.size(); ++i)
        if (ranked.first[i]) r1_doubled += ranked.doubled_ranks[i];

    TestResult t;
    t.n1 = n1;
    t.n2 = n2;
    t.u1 = static_cast<double>(r1_doubled) / 2.0 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    t.u2 = static_cast<double>(n1 * n2) - t.u1;
    t.u_statistic = std::min(t.u1, t.u2);

    const double n = static_cast<double>(n1 + n2);
    const double mean = static_cast<double>(n1 * n2) / 2.0;
    const double variance = n > 1.0 ? static_cast<double>(n1 * n2) / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)))
                                    : 0.0;

    const bool use_exact = !options.force_approx && n1 * n2 <= options.exact_threshold;
    t.method = use_exact ? MwuMethod::exact : MwuMethod::normal_approx_tie_corrected;

    if (variance <= 0.0) {
        t.degenerate = true;
        t.p_value = 1.0;
        return t;
    }

    if (use_exact) {
        t.p_value = exact_p(ranked, n1, n2, t.u1);
        return t;
    }

    const double diff = t.u1 - mean;
    const double corrected = std::max(0.0, std::abs(diff) - 0.5);
    const double sigma = std::sqrt(variance);
    t.z = std::copysign(corrected / sigma, diff);
    t.p_value = std::clamp(std::erfc(std::abs(t.z) / std::sqrt(2.0)), 0.0, 1.0);
    return t;
}

double mwu_permutation_oracle(std::span<const double> first, std::span<const double> second, std::size_t cap) {
    check_sample(first, "first");
    check_sample(second, "second");
    const std::size_t n1 = first.size(), n2 = second.size(), n = n1 + n2;
    if (n > cap) throw MwuError("permutation oracle cap exceeded: n = " + std::to_string(n));

    std::vector<double> pooled(first.begin(), first.end());
    pooled.insert(pooled.end(), second.begin(), second.end());

    // Doubled U of a labeling: pairs (x in group 1, y in group 2) with x > y
    // count 2, ties 1. Summing each chosen row over all columns overcounts by
    // exactly n1^2 (within-group pairs plus the diagonal).
    std::vector<long> row_wins(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) row_wins[i] += pooled[i] > pooled[j] ? 2 : pooled[i] == pooled[j] ? 1 : 0;
    const long overcount = static_cast<long>(n1 * n1);
    auto u2_of = [&](const std::vector<char>& in_first) {
        long u = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (in_first[i]) u += row_wins[i];
        return u - overcount;
    };

    const long mean2 = static_cast<long>(n1 * n2);
    std::vector<char> labels(n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n1), 1);
    const long observed = std::labs(u2_of(labels) - mean2);

    // Enumerate all C(n, n1) labelings: prev_permutation over a sorted-desc
    // 0/1 mask visits each once.
    std::size_t total = 0, extreme = 0;
    do {
        ++total;
        if (std::labs(u2_of(labels) - mean2) >= observed) ++extreme;
    } while (std::prev_permutation(labels.begin(), labels.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

} // namespace novelty
