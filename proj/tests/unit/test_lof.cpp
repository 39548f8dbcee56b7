#include <doctest.h>

#include "fixtures.hpp"
#include "novelty/lof.hpp"

#include <cmath>
#include <limits>

using namespace novelty;
using fixtures::line_points;

namespace {

std::vector<std::string> neighbor_ids(const PointSet& points, const NeighborInfo& info, std::size_t p) {
    std::vector<std::string> out;
    for (auto i : info.neighbors(p)) out.push_back(points.ids()[i]);
    return out;
}

} // namespace

static_assert(reach_dist(2.0, 5.0) == 5.0);
static_assert(reach_dist(2.0, 1.0) == 2.0);
static_assert(reach_dist(2.0, 2.0) == 2.0);

TEST_SUITE("lof") {

TEST_CASE("knn on a line") {
    PointSet pts = line_points({0, 1, 3}); // p0000, p0001, p0002
    NeighborInfo k1 = knn_query(pts, 1);
    CHECK(neighbor_ids(pts, k1, 0) == std::vector<std::string>{"p0001"});
    CHECK(k1.k_distance(0) == 1.0);

    NeighborInfo k2 = knn_query(pts, 2);
    CHECK(neighbor_ids(pts, k2, 2) == std::vector<std::string>{"p0001", "p0000"});
    CHECK(k2.k_distance(2) == 3.0);
}

TEST_CASE("distance ties") {
    PointSet pts({"a", "b", "c"}, {0, 0, 1, 0, -1, 0}, 2);
    NeighborInfo exact = knn_query(pts, 1, TieMode::exact_k);
    CHECK(neighbor_ids(pts, exact, pts.index_of("a")) == std::vector<std::string>{"b"});

    NeighborInfo inclusive = knn_query(pts, 1, TieMode::inclusive);
    CHECK(neighbor_ids(pts, inclusive, pts.index_of("a")) == std::vector<std::string>{"b", "c"});
    CHECK(inclusive.k_distance(pts.index_of("a")) == 1.0);

    // Input order does not matter: rows are sorted by id.
    PointSet shuffled({"c", "a", "b"}, {-1, 0, 0, 0, 1, 0}, 2);
    CHECK(neighbor_ids(shuffled, knn_query(shuffled, 1), shuffled.index_of("a")) == std::vector<std::string>{"b"});
}

TEST_CASE("lrd on a line") {
    PointSet pts = line_points({0, 1, 2, 3, 4});
    NeighborInfo info = knn_query(pts, 2);
    CHECK(lrd(info, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(lrd(info, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lrd(pts, info, "p0001") == lrd(info, 1));

    auto ref = fixtures::reference_lrd(pts, 2);
    for (std::size_t p = 0; p < pts.size(); ++p) CHECK(lrd(info, p) == doctest::Approx(ref[p]).epsilon(1e-15));
}

TEST_CASE("coincident points") {
    PointSet same({"a", "b", "c"}, {1, 1, 1, 1, 1, 1}, 2);
    NeighborInfo info = knn_query(same, 2);
    CHECK(std::isinf(lrd(info, 0)));
    LofResult r = lof_batch(same, 2);
    for (double v : r.lof) CHECK(v == 1.0);
    LofResult o = lof_bruteforce_oracle(same, 2);
    CHECK(max_relative_deviation(r.lof, o.lof) == 0.0);

    // A point near a coincident pair: its neighbors have infinite density.
    PointSet near({"a", "b", "c", "d"}, {0, 0, 0, 0, 0, 0, 1, 1}, 2);
    LofResult nr = lof_batch(near, 2);
    CHECK(std::isinf(nr.lof[3]));
    CHECK(max_relative_deviation(nr.lof, lof_bruteforce_oracle(near, 2).lof) == 0.0);
}

TEST_CASE("tetrahedron is uniform") {
    for (auto mode : {TieMode::exact_k, TieMode::inclusive}) {
        LofResult r = lof_batch(fixtures::tetrahedron(), 2, mode);
        for (double v : r.lof) CHECK(std::abs(v - 1.0) <= 1e-12);
    }
}

TEST_CASE("square with an outlier") {
    PointSet pts = fixtures::square_with_outlier();
    LofResult r = lof_batch(pts, 2);
    const std::size_t e = pts.index_of("e");

    // lrd(outlier) = 2 / (|e-(1,1)| + |e-(0,1)|), every corner has lrd 1.
    const double hand = (std::sqrt(162.0) + std::sqrt(181.0)) / 2.0;
    CHECK(r.lrd[e] == doctest::Approx(2.0 / (std::sqrt(162.0) + std::sqrt(181.0))).epsilon(1e-15));
    for (std::size_t p = 0; p < 4; ++p) CHECK(r.lrd[p] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.lof[e] - hand) <= 1e-12);
    CHECK(std::abs(r.lof[e] - 13.090773) <= 1e-6);
    CHECK(std::abs(fixtures::reference_lof(pts, 2)[e] - hand) <= 1e-12);
    CHECK(std::abs(lof_bruteforce_oracle(pts, 2).lof[e] - hand) <= 1e-12);
}

TEST_CASE("lof on a line") {
    PointSet pts = line_points({0, 1, 2, 3, 4});
    LofResult r = lof_batch(pts, 2);
    CHECK(std::abs(r.lof[2] - 2.0 / 3.0) <= 1e-12);
    auto ref = fixtures::reference_lof(pts, 2);
    CHECK(max_relative_deviation(r.lof, ref) <= 1e-12);
}

TEST_CASE("oracle equivalence on random sets") {
    PointSet pts = fixtures::random_points(200, 10, 2024);
    for (auto mode : {TieMode::exact_k, TieMode::inclusive})
        for (std::size_t k : {2, 5, 20}) {
            LofResult fast = lof_batch(pts, k, mode);
            LofResult slow = lof_bruteforce_oracle(pts, k, mode);
            CHECK(max_relative_deviation(fast.lof, slow.lof) <= 1e-9);
            CHECK(max_relative_deviation(fast.lrd, slow.lrd) <= 1e-9);
        }
    auto ref = fixtures::reference_lof(pts, 5);
    CHECK(max_relative_deviation(lof_batch(pts, 5).lof, ref) <= 1e-9);
}

TEST_CASE("oracle equivalence with many ties") {
    // Integer grid coordinates produce many equal distances.
    std::vector<std::string> ids;
    std::vector<double> coords;
    for (int i = 0; i < 60; ++i) {
        ids.push_back(fixtures::ids_for(static_cast<std::size_t>(i)));
        coords.push_back(i % 5);
        coords.push_back((i / 5) % 4);
        coords.push_back(i % 3);
    }
    PointSet pts(ids, coords, 3);
    for (auto mode : {TieMode::exact_k, TieMode::inclusive})
        for (std::size_t k : {1, 3, 8}) {
            LofResult fast = lof_batch(pts, k, mode);
            LofResult slow = lof_bruteforce_oracle(pts, k, mode);
            CHECK(max_relative_deviation(fast.lof, slow.lof) <= 1e-9);
        }
}

TEST_CASE("rigid motion and scaling invariance") {
    PointSet pts = fixtures::random_points(200, 10, 99);
    for (auto mode : {TieMode::exact_k, TieMode::inclusive}) {
        LofResult base = lof_batch(pts, 5, mode);
        for (double scale : {1.0, 0.001, 250.0}) {
            LofResult moved = lof_batch(fixtures::rigid_motion(pts, scale, 5), 5, mode);
            CHECK(max_relative_deviation(base.lof, moved.lof) <= 1e-9);
        }
    }
}

TEST_CASE("thread count does not change results") {
    PointSet pts = fixtures::random_points(300, 16, 3);
    LofResult one = lof_batch(pts, 7, TieMode::exact_k, 1);
    for (unsigned t : {2u, 3u, 8u}) {
        LofResult many = lof_batch(pts, 7, TieMode::exact_k, t);
        CHECK(many.lof == one.lof);
        CHECK(many.lrd == one.lrd);
    }
}

TEST_CASE("n = k + 1") {
    PointSet pts = fixtures::random_points(6, 3, 1);
    LofResult r = lof_batch(pts, 5);
    for (double v : r.lof) CHECK(std::isfinite(v));
    CHECK(max_relative_deviation(r.lof, lof_bruteforce_oracle(pts, 5).lof) <= 1e-12);
}

TEST_CASE("argument errors") {
    PointSet pts = fixtures::random_points(5, 2, 1);
    CHECK_THROWS_AS(knn_query(pts, 0), KOutOfRangeError);
    CHECK_THROWS_AS(knn_query(pts, 5), KOutOfRangeError);
    CHECK_THROWS_AS(lof_bruteforce_oracle(pts, 2, TieMode::exact_k, 4), OracleCapError);
    CHECK_THROWS_AS(PointSet({"a"}, {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(PointSet({"a", "a"}, {1.0, 2.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(PointSet({"a", "b"}, {1.0, std::nan("")}, 1), std::invalid_argument);
    CHECK_THROWS_AS(pts.index_of("zz"), std::out_of_range);
}

TEST_CASE("relative deviation") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(relative_deviation(1.0, 1.0) == 0.0);
    CHECK(relative_deviation(inf, inf) == 0.0);
    CHECK(std::isinf(relative_deviation(inf, 1.0)));
    CHECK(relative_deviation(2.0, 1.0) == 0.5);
    CHECK(relative_deviation(0.0, 0.0) == 0.0);
}

}
