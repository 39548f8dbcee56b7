#include "novelty/synthetic.hpp"

#include <cstdio>
#include <random>

namespace novelty {

namespace {

std::string doc_name(int year, std::size_t i, bool is_new) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%d-%05zu", is_new ? "N" : "C", year, i);
    return buf;
}

std::vector<double> gaussian(std::mt19937_64& rng, std::span<const double> center, double spread) {
    std::normal_distribution<double> normal(0.0, spread);
    std::vector<double> v(center.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = center[j] + normal(rng);
    return v;
}

// float32-representable so EMB1 round trips stay exact
std::vector<double> to_float_grid(std::vector<double> v) {
    for (auto& x : v) x = static_cast<double>(static_cast<float>(x));
    return v;
}

} // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    if (spec.years < 1 || spec.docs_per_year == 0 || spec.dim == 0 || spec.clusters == 0)
        throw std::invalid_argument("synthetic spec needs years, docs, dim and clusters");
    if (spec.outliers_per_year > spec.docs_per_year) throw std::invalid_argument("more outliers than docs per year");

    std::mt19937_64 rng(spec.seed);
    SyntheticData data;

    // Cluster centers per component.
    const std::vector<double> origin(spec.dim, 0.0);
    std::array<std::vector<std::vector<double>>, kComponentCount> centers;
    for (auto& per_component : centers)
        for (std::size_t c = 0; c < spec.clusters; ++c) per_component.push_back(gaussian(rng, origin, spec.center_spread));

    std::vector<ProposalRecord> records;
    // Base (model-independent) vectors per doc and component.
    struct BaseDoc {
        std::string id;
        int year;
        std::array<std::vector<double>, kComponentCount> vectors;
    };
    std::vector<BaseDoc> base;
    std::uniform_int_distribution<std::size_t> pick_cluster(0, spec.clusters - 1);
    std::poisson_distribution<std::int64_t> papers(3.0), transfers(0.8), patents(1.5), foreign(0.2);
    std::uniform_int_distribution<std::int64_t> funding(100'000'000, 900'000'000);
    std::uniform_int_distribution<int> duration(1, 5);

    for (int y = 0; y < spec.years; ++y) {
        const int year = spec.first_year + y;
        for (std::size_t i = 0; i < spec.docs_per_year; ++i) {
            const bool outlier = i < spec.outliers_per_year;
            ProposalRecord r;
            r.doc_id = doc_name(year, i, true);
            r.year = year;
            r.is_new = true;
            r.classification_code = "EE" + std::to_string(1 + i % 3);
            r.title = "synthetic proposal " + r.doc_id + " title";
            r.objectives = "synthetic proposal " + r.doc_id + " objectives";
            r.contents = "synthetic proposal " + r.doc_id + " contents";
            r.outcomes = "synthetic proposal " + r.doc_id + " outcomes";
            r.funding = funding(rng);
            r.duration_years = duration(rng);
            r.n_papers = papers(rng);
            r.n_domestic_patents = patents(rng);
            r.n_foreign_patents = foreign(rng);
            r.n_tech_transfers = transfers(rng) + (outlier ? spec.tech_transfer_shift : 0);

            std::array<std::vector<double>, kComponentCount> vectors;
            for (std::size_t c = 0; c < kComponentCount; ++c)
                vectors[c] = outlier ? gaussian(rng, origin, spec.outlier_spread)
                                     : gaussian(rng, centers[c][pick_cluster(rng)], spec.cluster_spread);
            if (outlier) data.planted_outliers[year].insert(r.doc_id);
            base.push_back({r.doc_id, year, std::move(vectors)});
            records.push_back(std::move(r));
        }
        for (std::size_t i = 0; i < spec.continuation_per_year; ++i) {
            ProposalRecord r;
            r.doc_id = doc_name(year, i, false);
            r.year = year;
            r.is_new = false;
            r.title = r.objectives = r.contents = r.outcomes = "continuation " + r.doc_id;
            records.push_back(std::move(r));
        }
    }

    // Model year t re-embeds every member selected up to t with a small drift.
    for (int y = 0; y < spec.years; ++y) {
        const int model_year = spec.first_year + y;
        for (auto tag : kAllComponents) {
            std::vector<EmbeddingMatrix::Row> rows;
            for (const auto& [id, selected, vectors] : base) {
                if (selected > model_year) continue;
                auto v = spec.model_drift > 0.0 ? gaussian(rng, vectors[index_of(tag)], spec.model_drift)
                                                : vectors[index_of(tag)];
                rows.emplace_back(id, to_float_grid(std::move(v)));
            }
            data.embeddings.add(EmbeddingMatrix::from_rows(model_year, tag, spec.dim, std::move(rows)));
        }
    }

    data.corpus = Corpus(std::move(records));
    return data;
}

} // namespace novelty
