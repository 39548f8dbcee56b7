#pragma once

#include "novelty/component.hpp"
#include "novelty/corpus.hpp"
#include "novelty/embedding_store.hpp"
#include "novelty/lof.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace novelty {

enum class Rounding { nearest, floor };
enum class NormScope { landscape, cohort };

std::string_view rounding_name(Rounding r);
std::optional<Rounding> rounding_from_name(std::string_view name);
std::string_view norm_scope_name(NormScope s);
std::optional<NormScope> norm_scope_from_name(std::string_view name);

class LandscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// k = max(k_min, round(fraction * landscape_size)), clamped to size - 1.
// `nearest` rounds half away from zero. Throws LandscapeError when
// landscape_size < k_min + 1 and std::invalid_argument on bad parameters.
std::size_t compute_k(std::size_t landscape_size, double fraction, std::size_t k_min = 2,
                      Rounding rounding = Rounding::nearest);

// Source of embedding matrices keyed by (model_year, component).
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // nullptr when no matrix exists for the key.
    virtual const EmbeddingMatrix* find(int model_year, ComponentTag component) const = 0;
};

class InMemoryEmbeddings final : public EmbeddingProvider {
public:
    void add(EmbeddingMatrix matrix);
    const EmbeddingMatrix* find(int model_year, ComponentTag component) const override;

private:
    std::map<std::pair<int, ComponentTag>, std::unique_ptr<EmbeddingMatrix>> matrices_;
};

struct LandscapeConfig {
    double k_fraction = 0.01;
    std::size_t k_min = 2;
    Rounding rounding = Rounding::nearest;
    TieMode tie_mode = TieMode::exact_k;
    NormScope norm_scope = NormScope::landscape;
    std::optional<std::size_t> pca_dim; // off when unset
    bool strict_embeddings = true;
    std::array<double, kComponentCount> weights{1.0, 1.0, 1.0, 1.0};
    unsigned threads = 0;
};

struct EmbeddingSubstitution {
    std::string doc_id;
    ComponentTag component;
    int used_model_year;
};

struct AnnualLandscape {
    int year = 0;
    std::vector<std::string> member_ids; // ascending
    std::vector<std::string> cohort_ids; // new proposals selected in `year`, ascending
    std::vector<EmbeddingMatrix> matrices; // one per component, indexed by ComponentTag
    std::size_t k = 0;
    std::vector<EmbeddingSubstitution> substitutions; // lenient-mode fallbacks

    const EmbeddingMatrix& matrix(ComponentTag tag) const { return matrices.at(index_of(tag)); }
};

class MissingEmbeddingError : public LandscapeError {
public:
    MissingEmbeddingError(int model_year, std::vector<std::pair<std::string, ComponentTag>> missing);
    const std::vector<std::pair<std::string, ComponentTag>>& missing() const noexcept { return missing_; }

private:
    std::vector<std::pair<std::string, ComponentTag>> missing_;
};

// Cumulative landscape of every new proposal selected in or before `year`,
// embedded with model_year = `year`. PCA, when configured, is fitted per
// component on the landscape and applied to all of its rows.
AnnualLandscape build_landscape(const Corpus& corpus, const EmbeddingProvider& embeddings, int year,
                                const LandscapeConfig& config = {});

struct NoveltyScore {
    std::string doc_id;
    int scoring_year = 0;
    int selection_year = 0;
    bool in_cohort = false;
    std::array<double, kComponentCount> raw_lof{};
    std::array<double, kComponentCount> normalized{};
    double total = 0.0;
};

struct YearScores {
    int year = 0;
    std::size_t k = 0;
    std::vector<NoveltyScore> scores; // ascending doc_id

    std::vector<const NoveltyScore*> cohort() const;
};

// (x - min) / (max - min); all zeros when max == min. Requires a non-empty,
// finite input.
std::vector<double> normalize_scores(std::span<const double> raw);

// Weighted mean of per-component normalized scores; equal weights give the
// arithmetic mean.
double compose_total(const std::array<double, kComponentCount>& normalized,
                     const std::array<double, kComponentCount>& weights = {1.0, 1.0, 1.0, 1.0});

// LOF per component with k = landscape.k, infinite values capped at the
// largest finite value, min-max normalization over the configured scope and
// composition into a total. Every member is scored.
YearScores score_year(const AnnualLandscape& landscape, const Corpus& corpus, const LandscapeConfig& config = {});

// Scores for (doc_id, scoring_year), defined only for
// scoring_year >= selection year.
class NoveltyMatrix {
public:
    void add(const YearScores& year_scores);

    using Entries = std::map<std::string, std::map<int, NoveltyScore>, std::less<>>;
    const Entries& entries() const noexcept { return entries_; }
    const std::map<int, std::size_t>& k_by_year() const noexcept { return k_by_year_; }
    std::vector<int> years() const;
    const NoveltyScore* find(std::string_view doc_id, int scoring_year) const;

private:
    Entries entries_;
    std::map<int, std::size_t> k_by_year_;
};

using YearCallback = std::function<void(const AnnualLandscape&, const YearScores&)>;

// Builds and scores the landscape of every year in [first_year, last_year].
NoveltyMatrix rescore_matrix(const Corpus& corpus, const EmbeddingProvider& embeddings, int first_year,
                             int last_year, const LandscapeConfig& config = {},
                             const YearCallback& on_year = {});

// Scores CSV: header
// doc_id,scoring_year,nov_title,nov_objectives,nov_contents,nov_outcomes,total_novelty
inline constexpr std::string_view kScoresCsvHeader =
    "doc_id,scoring_year,nov_title,nov_objectives,nov_contents,nov_outcomes,total_novelty";

void write_scores_csv(const YearScores& scores, std::ostream& out, int precision = 4);

struct ScoreRow {
    std::string doc_id;
    int scoring_year = 0;
    std::array<double, kComponentCount> normalized{};
    double total = 0.0;
};

// Throws std::runtime_error with the offending line number on malformed input.
std::vector<ScoreRow> read_scores_csv(std::istream& in);

// doc_id x year grid of totals; undefined cells are empty.
void write_matrix_csv(const NoveltyMatrix& matrix, std::ostream& out, int precision = 4);

} // namespace novelty
