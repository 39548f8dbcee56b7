#include "novelty/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace novelty {

// Deliberately naive: shares nothing with knn_query / lof_from_neighbors
// beyond PointSet, so the two can check each other.
LofResult lof_bruteforce_oracle(const PointSet& points, std::size_t k, TieMode mode, std::size_t cap) {
    const std::size_t n = points.size();
    if (n > cap) throw OracleCapError("oracle cap exceeded: n = " + std::to_string(n) + " > " + std::to_string(cap));
    if (k < 1 || k > n - 1)
        throw KOutOfRangeError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");

    const double inf = std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        auto a = points.point(i);
        for (std::size_t j = 0; j < n; ++j) {
            auto b = points.point(j);
            double s = 0.0;
            for (std::size_t t = 0; t < points.dim(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
            d[i][j] = std::sqrt(s);
        }
    }

    // kNN(p) and k-distance(p)
    std::vector<std::vector<std::size_t>> knn(n);
    std::vector<double> k_distance(n);
    for (std::size_t p = 0; p < n; ++p) {
        std::vector<std::pair<double, std::size_t>> others;
        for (std::size_t o = 0; o < n; ++o)
            if (o != p) others.emplace_back(d[p][o], o);
        std::sort(others.begin(), others.end());

        k_distance[p] = others[k - 1].first;
        for (const auto& [dist, o] : others) {
            if (mode == TieMode::exact_k && knn[p].size() == k) break;
            if (mode == TieMode::inclusive && dist > k_distance[p]) break;
            knn[p].push_back(o);
        }
    }

    LofResult r;
    r.lrd.resize(n);
    r.lof.resize(n);

    // lrd_k(p) = |N| / sum_o reachDist_k(p, o)
    for (std::size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (std::size_t o : knn[p]) sum += std::max(k_distance[o], d[p][o]);
        double size = mode == TieMode::exact_k ? static_cast<double>(k) : static_cast<double>(knn[p].size());
        r.lrd[p] = sum == 0.0 ? inf : size / sum;
    }

    // LOF(p) = (1/|N| sum_o lrd_k(o)) / lrd_k(p)
    for (std::size_t p = 0; p < n; ++p) {
        double sum = 0.0;
        for (std::size_t o : knn[p]) sum += r.lrd[o];
        double size = mode == TieMode::exact_k ? static_cast<double>(k) : static_cast<double>(knn[p].size());
        double numerator = sum / size;
        if (std::isinf(r.lrd[p]))
            r.lof[p] = std::isinf(numerator) ? 1.0 : 0.0;
        else
            r.lof[p] = numerator / r.lrd[p];
    }
    return r;
}

} // namespace novelty
