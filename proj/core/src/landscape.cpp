#include "novelty/landscape.hpp"

#include "novelty/pca.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace novelty {

namespace {

std::string format_fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

// Members of year t: every new proposal selected in or before t.
std::vector<std::string> cumulative_members(const Corpus& corpus, int year) {
    std::vector<std::string> members;
    for (const auto& [y, ids] : corpus.year_index()) {
        if (y > year) break;
        members.insert(members.end(), ids.begin(), ids.end());
    }
    std::sort(members.begin(), members.end());
    return members;
}

} // namespace

std::string_view rounding_name(Rounding r) { return r == Rounding::nearest ? "nearest" : "floor"; }

std::optional<Rounding> rounding_from_name(std::string_view name) {
    if (name == "nearest") return Rounding::nearest;
    if (name == "floor") return Rounding::floor;
    return std::nullopt;
}

std::string_view norm_scope_name(NormScope s) { return s == NormScope::landscape ? "landscape" : "cohort"; }

std::optional<NormScope> norm_scope_from_name(std::string_view name) {
    if (name == "landscape") return NormScope::landscape;
    if (name == "cohort") return NormScope::cohort;
    return std::nullopt;
}

std::size_t compute_k(std::size_t landscape_size, double fraction, std::size_t k_min, Rounding rounding) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("k fraction must be in (0,1)");
    if (k_min < 2) throw std::invalid_argument("k_min must be at least 2");
    if (landscape_size < k_min + 1)
        throw LandscapeError("landscape of " + std::to_string(landscape_size) + " points is too small for k_min = " +
                             std::to_string(k_min));

    const double scaled = fraction * static_cast<double>(landscape_size);
    const double rounded = rounding == Rounding::nearest ? std::round(scaled) : std::floor(scaled);
    std::size_t k = std::max(k_min, static_cast<std::size_t>(rounded));
    return std::min(k, landscape_size - 1);
}

void InMemoryEmbeddings::add(EmbeddingMatrix matrix) {
    auto key = std::pair{matrix.model_year(), matrix.component()};
    matrices_[key] = std::make_unique<EmbeddingMatrix>(std::move(matrix));
}

const EmbeddingMatrix* InMemoryEmbeddings::find(int model_year, ComponentTag component) const {
    auto it = matrices_.find({model_year, component});
    return it == matrices_.end() ? nullptr : it->second.get();
}

MissingEmbeddingError::MissingEmbeddingError(int model_year,
                                             std::vector<std::pair<std::string, ComponentTag>> missing)
    : LandscapeError([&] {
          std::string msg = "missing embeddings for model year " + std::to_string(model_year) + ": " +
                            std::to_string(missing.size()) + " (doc, component) pairs";
          for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 5); ++i)
              msg += (i == 0 ? " [" : ", ") + missing[i].first + "/" + std::string(component_name(missing[i].second));
          if (!missing.empty()) msg += missing.size() > 5 ? ", ...]" : "]";
          return msg;
      }()),
      missing_(std::move(missing)) {}

AnnualLandscape build_landscape(const Corpus& corpus, const EmbeddingProvider& embeddings, int year,
                                const LandscapeConfig& config) {
    AnnualLandscape land;
    land.year = year;
    land.member_ids = cumulative_members(corpus, year);
    if (auto it = corpus.year_index().find(year); it != corpus.year_index().end()) land.cohort_ids = it->second;
    land.k = compute_k(land.member_ids.size(), config.k_fraction, config.k_min, config.rounding);

    std::vector<std::pair<std::string, ComponentTag>> missing;
    for (auto tag : kAllComponents) {
        const EmbeddingMatrix* current = embeddings.find(year, tag);
        std::optional<std::size_t> dim;
        if (current) dim = current->dim();

        std::vector<EmbeddingMatrix::Row> rows;
        rows.reserve(land.member_ids.size());
        for (const auto& id : land.member_ids) {
            std::optional<std::span<const double>> row;
            if (current) row = current->find(id);

            if (!row && !config.strict_embeddings) {
                const int selected = corpus.find(id)->year;
                for (int y = year - 1; y >= selected && !row; --y) {
                    const EmbeddingMatrix* older = embeddings.find(y, tag);
                    if (!older) continue;
                    if (auto r = older->find(id)) {
                        if (dim && older->dim() != *dim)
                            throw LandscapeError("dim inconsistency for component " + std::string(component_name(tag)) +
                                                 ": model year " + std::to_string(y) + " has dim " +
                                                 std::to_string(older->dim()) + ", expected " + std::to_string(*dim));
                        dim = older->dim();
                        row = r;
                        land.substitutions.push_back({id, tag, y});
                    }
                }
            }

            if (!row) {
                missing.emplace_back(id, tag);
                continue;
            }
            rows.emplace_back(id, std::vector<double>(row->begin(), row->end()));
        }

        if (!missing.empty()) continue;
        land.matrices.push_back(EmbeddingMatrix::from_rows(year, tag, *dim, std::move(rows)));
    }
    if (!missing.empty()) throw MissingEmbeddingError(year, std::move(missing));

    if (config.pca_dim) {
        for (auto& m : land.matrices) {
            const std::size_t n_comp = std::min({*config.pca_dim, m.rows(), m.dim()});
            m = pca_transform(pca_fit(m, n_comp), m);
        }
    }
    return land;
}

std::vector<const NoveltyScore*> YearScores::cohort() const {
    std::vector<const NoveltyScore*> out;
    for (const auto& s : scores)
        if (s.in_cohort) out.push_back(&s);
    return out;
}

std::vector<double> normalize_scores(std::span<const double> raw) {
    if (raw.empty()) throw std::invalid_argument("cannot normalize an empty score list");
    if (!std::all_of(raw.begin(), raw.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("scores must be finite before normalization");
    auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double min = *lo, max = *hi;
    std::vector<double> out(raw.size(), 0.0);
    if (max == min) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - min) / (max - min);
    return out;
}

double compose_total(const std::array<double, kComponentCount>& normalized,
                     const std::array<double, kComponentCount>& weights) {
    double weight_sum = 0.0, sum = 0.0;
    for (std::size_t c = 0; c < kComponentCount; ++c) {
        if (!(weights[c] >= 0.0)) throw std::invalid_argument("component weights must be non-negative");
        weight_sum += weights[c];
        sum += weights[c] * normalized[c];
    }
    if (weight_sum <= 0.0) throw std::invalid_argument("component weights must not all be zero");
    return sum / weight_sum;
}

YearScores score_year(const AnnualLandscape& landscape, const Corpus& corpus, const LandscapeConfig& config) {
    const std::size_t n = landscape.member_ids.size();

    YearScores out;
    out.year = landscape.year;
    out.k = landscape.k;
    out.scores.resize(n);

    std::vector<char> in_cohort(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& s = out.scores[i];
        s.doc_id = landscape.member_ids[i];
        s.scoring_year = landscape.year;
        const ProposalRecord* rec = corpus.find(s.doc_id);
        if (!rec) throw LandscapeError("landscape member \"" + s.doc_id + "\" not in corpus");
        s.selection_year = rec->year;
        s.in_cohort = rec->year == landscape.year;
        in_cohort[i] = s.in_cohort;
    }
    const bool cohort_scope =
        config.norm_scope == NormScope::cohort && std::any_of(in_cohort.begin(), in_cohort.end(), [](char c) { return c; });

    for (auto tag : kAllComponents) {
        const auto c = index_of(tag);
        const EmbeddingMatrix& matrix = landscape.matrix(tag);
        if (matrix.ids() != landscape.member_ids)
            throw LandscapeError("component matrix does not cover the landscape members");

        LofResult lof = lof_batch(PointSet(matrix), landscape.k, config.tie_mode, config.threads);

        // Cap infinities at the largest finite score of this component.
        double cap = -std::numeric_limits<double>::infinity();
        for (double v : lof.lof)
            if (std::isfinite(v)) cap = std::max(cap, v);
        if (!std::isfinite(cap)) cap = 1.0;
        std::vector<double> capped(n);
        for (std::size_t i = 0; i < n; ++i) capped[i] = std::isfinite(lof.lof[i]) ? lof.lof[i] : cap;

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            if (cohort_scope && !in_cohort[i]) continue;
            lo = std::min(lo, capped[i]);
            hi = std::max(hi, capped[i]);
        }

        for (std::size_t i = 0; i < n; ++i) {
            auto& s = out.scores[i];
            s.raw_lof[c] = lof.lof[i];
            double v = hi > lo ? (capped[i] - lo) / (hi - lo) : 0.0;
            s.normalized[c] = std::clamp(v, 0.0, 1.0);
        }
    }

    for (auto& s : out.scores) s.total = compose_total(s.normalized, config.weights);
    return out;
}

void NoveltyMatrix::add(const YearScores& year_scores) {
    k_by_year_[year_scores.year] = year_scores.k;
    for (const auto& s : year_scores.scores) {
        if (s.scoring_year < s.selection_year)
            throw std::invalid_argument("score for \"" + s.doc_id + "\" precedes its selection year");
        entries_[s.doc_id][s.scoring_year] = s;
    }
}

std::vector<int> NoveltyMatrix::years() const {
    std::vector<int> ys;
    for (const auto& [y, k] : k_by_year_) ys.push_back(y);
    return ys;
}

const NoveltyScore* NoveltyMatrix::find(std::string_view doc_id, int scoring_year) const {
    auto it = entries_.find(doc_id);
    if (it == entries_.end()) return nullptr;
    auto jt = it->second.find(scoring_year);
    return jt == it->second.end() ? nullptr : &jt->second;
}

NoveltyMatrix rescore_matrix(const Corpus& corpus, const EmbeddingProvider& embeddings, int first_year,
                             int last_year, const LandscapeConfig& config, const YearCallback& on_year) {
    if (first_year > last_year) throw std::invalid_argument("first year after last year");
    NoveltyMatrix matrix;
    for (int year = first_year; year <= last_year; ++year) {
        // Years before the first cohort have no landscape.
        if (corpus.year_index().empty() || corpus.year_index().begin()->first > year) continue;
        AnnualLandscape land = build_landscape(corpus, embeddings, year, config);
        YearScores scores = score_year(land, corpus, config);
        if (on_year) on_year(land, scores);
        matrix.add(scores);
    }
    return matrix;
}

void write_scores_csv(const YearScores& scores, std::ostream& out, int precision) {
    out << kScoresCsvHeader << '\n';
    for (const auto& s : scores.scores) {
        out << s.doc_id << ',' << s.scoring_year;
        for (double v : s.normalized) out << ',' << format_fixed(v, precision);
        out << ',' << format_fixed(s.total, precision) << '\n';
    }
}

std::vector<ScoreRow> read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("scores CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kScoresCsvHeader) throw std::runtime_error("scores CSV: unexpected header");

    std::vector<ScoreRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        auto bad = [&](const std::string& why) {
            return std::runtime_error("scores CSV line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 7) throw bad("expected 7 fields");
        ScoreRow r;
        r.doc_id = fields[0];
        if (r.doc_id.empty()) throw bad("empty doc_id");
        if (!parse_number(fields[1], r.scoring_year)) throw bad("bad scoring_year");
        for (std::size_t c = 0; c < kComponentCount; ++c)
            if (!parse_number(fields[2 + c], r.normalized[c]) || !(r.normalized[c] >= 0.0 && r.normalized[c] <= 1.0))
                throw bad("component score must be a number in [0,1]");
        if (!parse_number(fields[6], r.total) || !(r.total >= 0.0 && r.total <= 1.0))
            throw bad("total must be a number in [0,1]");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_matrix_csv(const NoveltyMatrix& matrix, std::ostream& out, int precision) {
    const auto years = matrix.years();
    out << "doc_id";
    for (int y : years) out << ',' << y;
    out << '\n';
    for (const auto& [doc, by_year] : matrix.entries()) {
        out << doc;
        for (int y : years) {
            out << ',';
            if (auto it = by_year.find(y); it != by_year.end()) out << format_fixed(it->second.total, precision);
        }
        out << '\n';
    }
}

} // namespace novelty
