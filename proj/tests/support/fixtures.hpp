#pragma once

#include "novelty/corpus.hpp"
#include "novelty/embedding_store.hpp"
#include "novelty/lof.hpp"
#include "novelty/synthetic.hpp"
#include "novelty/workspace.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

// New proposals per selection year, 2010..2022.
inline constexpr int kTable1FirstYear = 2010;
inline constexpr std::array<std::size_t, 13> kTable1NewCounts = {1052, 940, 990, 894, 863, 898, 728,
                                                                 1008, 830, 844, 945, 1127, 1137};
// k per scoring year as published, 2010..2022.
inline constexpr std::array<std::size_t, 13> kPublishedK = {10, 20, 30, 39, 47, 56, 64, 74, 82, 90, 100, 111, 122};

std::vector<std::size_t> table1_cumulative();

novelty::ProposalRecord make_record(std::string id, int year, bool is_new = true);

// One new proposal per Table 1 count for 2010..last_year, ids "T<year>-<nnnn>".
novelty::Corpus table1_corpus(int last_year);

std::string ids_for(std::size_t i); // "p0000", "p0001", ...

novelty::PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed);
novelty::PointSet line_points(const std::vector<double>& xs);
novelty::PointSet tetrahedron();
// Unit square corners then (10,10), ids "a".."e".
novelty::PointSet square_with_outlier();

// Applies x -> scale * R x + t with a seeded random orthogonal R.
novelty::PointSet rigid_motion(const novelty::PointSet& points, double scale, std::uint64_t seed);

// Straight from the definitions, exact-k tie rule by ascending index.
std::vector<double> reference_lof(const novelty::PointSet& points, std::size_t k);
std::vector<double> reference_lrd(const novelty::PointSet& points, std::size_t k);

// Two-sided permutation p for the Mann-Whitney statistic by enumerating every
// split of the pooled sample.
double reference_mwu_p(const std::vector<double>& a, const std::vector<double>& b);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Corpus and EMB1 files of a synthetic spec, written straight into a
// workspace.
novelty::SyntheticData write_synthetic_workspace(const novelty::Workspace& ws, const novelty::SyntheticSpec& spec);

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args);

std::string slurp(const std::filesystem::path& path);

} // namespace fixtures
