#include "novelty/lof.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace novelty {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Query and reference tile sizes for the distance sweep. A reference tile of
// 128 rows x 768 dims is ~768 KiB, which stays in L2 while a query tile
// streams over it.
constexpr std::size_t kQueryTile = 16;
constexpr std::size_t kPointTile = 128;

double squared_distance(const double* a, const double* b, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        double d = a[j] - b[j];
        sum += d * d;
    }
    return sum;
}

struct Candidate {
    double dist2;
    std::uint32_t index;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.index < b.index;
}

void select_neighbors(std::vector<Candidate>& candidates, std::size_t k, TieMode mode,
                      std::vector<std::uint32_t>& out_index, std::vector<double>& out_dist) {
    auto kth = candidates.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(candidates.begin(), kth, candidates.end(), candidate_less);

    std::size_t count = k;
    if (mode == TieMode::inclusive) {
        // Everything after the k-th element that shares its distance.
        const double kdist2 = kth->dist2;
        auto tail = std::partition(kth + 1, candidates.end(), [&](const Candidate& c) { return c.dist2 <= kdist2; });
        count = static_cast<std::size_t>(tail - candidates.begin());
    }
    std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count), candidate_less);

    out_index.resize(count);
    out_dist.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        out_index[i] = candidates[i].index;
        out_dist[i] = std::sqrt(candidates[i].dist2);
    }
}

// Sums f(neighbor_index, position) over a neighborhood in ascending neighbor
// index order.
template <typename F>
double sum_by_index(std::span<const std::uint32_t> neighbors, F&& f) {
    std::vector<std::size_t> order(neighbors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return neighbors[a] < neighbors[b]; });
    double sum = 0.0;
    for (std::size_t pos : order) sum += f(neighbors[pos], pos);
    return sum;
}

} // namespace

std::string_view tie_mode_name(TieMode mode) {
    return mode == TieMode::exact_k ? "exact-k" : "inclusive";
}

std::optional<TieMode> tie_mode_from_name(std::string_view name) {
    if (name == "exact-k") return TieMode::exact_k;
    if (name == "inclusive") return TieMode::inclusive;
    return std::nullopt;
}

PointSet::PointSet(std::vector<std::string> ids, std::vector<double> coords, std::size_t dim) : dim_(dim) {
    const std::size_t n = ids.size();
    if (dim == 0) throw std::invalid_argument("point dim must be positive");
    if (n < 2) throw std::invalid_argument("a point set needs at least 2 points");
    if (coords.size() != n * dim) throw std::invalid_argument("coordinate buffer does not match n x dim");
    if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("too many points");
    if (!std::all_of(coords.begin(), coords.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("point coordinates must be finite");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t i = 1; i < n; ++i)
        if (ids[order[i]] == ids[order[i - 1]]) throw std::invalid_argument("duplicate point id \"" + ids[order[i]] + "\"");

    ids_.reserve(n);
    coords_.reserve(n * dim);
    for (std::size_t i : order) {
        ids_.push_back(std::move(ids[i]));
        coords_.insert(coords_.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                       coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
    }
}

PointSet::PointSet(const EmbeddingMatrix& matrix)
    : PointSet(matrix.ids(), std::vector<double>(matrix.data().begin(), matrix.data().end()), matrix.dim()) {}

std::size_t PointSet::index_of(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw std::out_of_range("unknown point id \"" + std::string(id) + "\"");
    return static_cast<std::size_t>(it - ids_.begin());
}

NeighborInfo::NeighborInfo(std::size_t k, TieMode mode, std::vector<std::size_t> offsets,
                           std::vector<std::uint32_t> neighbors, std::vector<double> distances)
    : k_(k), mode_(mode), offsets_(std::move(offsets)), neighbors_(std::move(neighbors)),
      distances_(std::move(distances)) {
    if (offsets_.empty() || offsets_.back() != neighbors_.size() || neighbors_.size() != distances_.size())
        throw std::invalid_argument("inconsistent neighbor layout");
    for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
        if (offsets_[i + 1] <= offsets_[i]) throw std::invalid_argument("every point needs at least one neighbor");
}

NeighborInfo knn_query(const PointSet& points, std::size_t k, TieMode mode, unsigned threads) {
    const std::size_t n = points.size();
    const std::size_t dim = points.dim();
    if (k < 1 || k > n - 1)
        throw KOutOfRangeError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");

    std::vector<std::vector<std::uint32_t>> index(n);
    std::vector<std::vector<double>> dist(n);
    const double* base = points.coords().data();
    const std::size_t n_blocks = (n + kQueryTile - 1) / kQueryTile;

    detail::parallel_for(n_blocks, threads, [&](std::size_t block) {
        const std::size_t q0 = block * kQueryTile;
        const std::size_t q1 = std::min(n, q0 + kQueryTile);
        const std::size_t nq = q1 - q0;

        std::vector<double> d2(nq * n);
        for (std::size_t p0 = 0; p0 < n; p0 += kPointTile) {
            const std::size_t p1 = std::min(n, p0 + kPointTile);
            for (std::size_t q = q0; q < q1; ++q) {
                const double* a = base + q * dim;
                double* row = d2.data() + (q - q0) * n;
                for (std::size_t p = p0; p < p1; ++p) row[p] = squared_distance(a, base + p * dim, dim);
            }
        }

        std::vector<Candidate> candidates;
        candidates.reserve(n - 1);
        for (std::size_t q = q0; q < q1; ++q) {
            candidates.clear();
            const double* row = d2.data() + (q - q0) * n;
            for (std::size_t p = 0; p < n; ++p)
                if (p != q) candidates.push_back({row[p], static_cast<std::uint32_t>(p)});
            select_neighbors(candidates, k, mode, index[q], dist[q]);
        }
    });

    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + index[i].size();
    std::vector<std::uint32_t> flat_index;
    std::vector<double> flat_dist;
    flat_index.reserve(offsets.back());
    flat_dist.reserve(offsets.back());
    for (std::size_t i = 0; i < n; ++i) {
        flat_index.insert(flat_index.end(), index[i].begin(), index[i].end());
        flat_dist.insert(flat_dist.end(), dist[i].begin(), dist[i].end());
    }
    return NeighborInfo(k, mode, std::move(offsets), std::move(flat_index), std::move(flat_dist));
}

double lrd(const NeighborInfo& neighbors, std::size_t p) {
    auto ids = neighbors.neighbors(p);
    auto dists = neighbors.distances(p);
    double sum = sum_by_index(ids, [&](std::uint32_t o, std::size_t pos) {
        return reach_dist(neighbors.k_distance(o), dists[pos]);
    });
    if (sum == 0.0) return kInf;
    const double divisor =
        neighbors.tie_mode() == TieMode::exact_k ? static_cast<double>(neighbors.k()) : static_cast<double>(ids.size());
    return divisor / sum;
}

double lrd(const PointSet& points, const NeighborInfo& neighbors, std::string_view doc_id) {
    return lrd(neighbors, points.index_of(doc_id));
}

LofResult lof_from_neighbors(const NeighborInfo& neighbors, unsigned threads) {
    const std::size_t n = neighbors.size();
    LofResult result;
    result.lrd.resize(n);
    result.lof.resize(n);

    constexpr std::size_t chunk = 256;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    detail::parallel_for(n_chunks, threads, [&](std::size_t c) {
        for (std::size_t p = c * chunk; p < std::min(n, (c + 1) * chunk); ++p) result.lrd[p] = lrd(neighbors, p);
    });

    detail::parallel_for(n_chunks, threads, [&](std::size_t c) {
        for (std::size_t p = c * chunk; p < std::min(n, (c + 1) * chunk); ++p) {
            auto ids = neighbors.neighbors(p);
            double sum = sum_by_index(ids, [&](std::uint32_t o, std::size_t) { return result.lrd[o]; });
            const double divisor = neighbors.tie_mode() == TieMode::exact_k ? static_cast<double>(neighbors.k())
                                                                            : static_cast<double>(ids.size());
            const double mean_neighbor_lrd = sum / divisor;
            const double own = result.lrd[p];
            if (std::isinf(own)) {
                // An infinite own density implies every neighbor coincides with
                // p and has k coincident neighbors itself, so the numerator is
                // infinite too; 0 covers the unreachable finite case.
                result.lof[p] = std::isinf(mean_neighbor_lrd) ? 1.0 : 0.0;
            } else {
                result.lof[p] = mean_neighbor_lrd / own;
            }
        }
    });
    return result;
}

LofResult lof_batch(const PointSet& points, std::size_t k, TieMode mode, unsigned threads) {
    return lof_from_neighbors(knn_query(points, k, mode, threads), threads);
}

double relative_deviation(double a, double b) {
    if (a == b) return 0.0;
    if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) return kInf;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

double max_relative_deviation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) return kInf;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_deviation(a[i], b[i]));
    return worst;
}

} // namespace novelty
