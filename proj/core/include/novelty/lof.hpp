#pragma once

#include "novelty/embedding_store.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace novelty {

// How distance ties at the k-th neighbor are handled.
//   exact_k:   exactly k neighbors, ties broken by ascending doc_id; lrd and
//              LOF divide by k.
//   inclusive: every point within k-distance is a neighbor; lrd and LOF
//              divide by the neighborhood size.
enum class TieMode { exact_k, inclusive };

std::string_view tie_mode_name(TieMode mode);
std::optional<TieMode> tie_mode_from_name(std::string_view name);

// Euclidean point set with unique ids sorted ascending, n >= 2, finite
// coordinates. Index order equals id order, so index ties follow the id rule.
class PointSet {
public:
    // Rows are reordered by id if needed. Throws std::invalid_argument on
    // invariant violations.
    PointSet(std::vector<std::string> ids, std::vector<double> coords, std::size_t dim);
    explicit PointSet(const EmbeddingMatrix& matrix);

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::span<const double> point(std::size_t i) const {
        return std::span<const double>(coords_).subspan(i * dim_, dim_);
    }
    std::span<const double> coords() const noexcept { return coords_; }
    std::size_t index_of(std::string_view id) const; // throws std::out_of_range

private:
    std::vector<std::string> ids_;
    std::vector<double> coords_;
    std::size_t dim_;
};

// Per-point neighbor lists in CSR layout. Neighbors are ordered by
// (distance, index); k_distance is the last neighbor distance.
class NeighborInfo {
public:
    NeighborInfo(std::size_t k, TieMode mode, std::vector<std::size_t> offsets,
                 std::vector<std::uint32_t> neighbors, std::vector<double> distances);

    std::size_t k() const noexcept { return k_; }
    TieMode tie_mode() const noexcept { return mode_; }
    std::size_t size() const noexcept { return offsets_.size() - 1; }

    std::span<const std::uint32_t> neighbors(std::size_t i) const {
        return std::span<const std::uint32_t>(neighbors_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }
    std::span<const double> distances(std::size_t i) const {
        return std::span<const double>(distances_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }
    double k_distance(std::size_t i) const { return distances_[offsets_[i + 1] - 1]; }

private:
    std::size_t k_;
    TieMode mode_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<double> distances_;
};

struct LofResult {
    std::vector<double> lrd; // > 0, or +inf for coincident neighborhoods
    std::vector<double> lof;
};

class KOutOfRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exact brute-force k-nearest neighbors; a point is never its own neighbor.
// Requires 1 <= k <= n-1. `threads` = 0 uses the hardware concurrency; the
// result does not depend on it.
NeighborInfo knn_query(const PointSet& points, std::size_t k, TieMode mode = TieMode::exact_k,
                       unsigned threads = 0);

// max(k-distance(o), d(p, o))
constexpr double reach_dist(double k_distance_o, double d_po) {
    return k_distance_o > d_po ? k_distance_o : d_po;
}

// Local reachability density of point `p`. Reach distances are summed in
// ascending neighbor index order. Returns +inf when the sum is 0.
double lrd(const NeighborInfo& neighbors, std::size_t p);
double lrd(const PointSet& points, const NeighborInfo& neighbors, std::string_view doc_id);

// LOF for every point. Degenerate conventions: inf/inf = 1 (coincident
// clusters are inliers), inf numerator over finite lrd = +inf.
LofResult lof_batch(const PointSet& points, std::size_t k, TieMode mode = TieMode::exact_k,
                    unsigned threads = 0);
LofResult lof_from_neighbors(const NeighborInfo& neighbors, unsigned threads = 0);

inline constexpr std::size_t kDefaultOracleCap = 2000;

class OracleCapError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Independent O(n^2) reference: full distance matrix, sort-based neighbors,
// literal density formulas. Throws OracleCapError when n > cap.
LofResult lof_bruteforce_oracle(const PointSet& points, std::size_t k, TieMode mode = TieMode::exact_k,
                                std::size_t cap = kDefaultOracleCap);

// |a-b| / max(|a|, |b|); 0 for equal values (including equal infinities),
// +inf when exactly one side is infinite.
double relative_deviation(double a, double b);
double max_relative_deviation(std::span<const double> a, std::span<const double> b);

} // namespace novelty
