#pragma once

#include "novelty/corpus.hpp"
#include "novelty/landscape.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace novelty {

// Seeded mixture-of-Gaussians workspace: every year adds `docs_per_year` new
// proposals, `outliers_per_year` of which are planted far from all clusters
// in every component. Each model year re-embeds all earlier members with a
// small deterministic drift.
struct SyntheticSpec {
    int first_year = 2010;
    int years = 3;
    std::size_t docs_per_year = 300;
    std::size_t continuation_per_year = 0;
    std::size_t outliers_per_year = 10;
    std::size_t dim = 32;
    std::size_t clusters = 6;
    double cluster_spread = 1.0;
    double center_spread = 5.0;
    double outlier_spread = 6.0;
    double model_drift = 0.01;
    // Added to n_tech_transfers of every planted outlier.
    std::int64_t tech_transfer_shift = 0;
    std::uint64_t seed = 42;
};

struct SyntheticData {
    Corpus corpus;
    InMemoryEmbeddings embeddings;
    std::map<int, std::set<std::string>> planted_outliers;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec);

} // namespace novelty
