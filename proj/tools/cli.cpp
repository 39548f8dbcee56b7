#include "cli.hpp"

#include "novelty/corpus.hpp"
#include "novelty/embedding_store.hpp"
#include "novelty/landscape.hpp"
#include "novelty/lof.hpp"
#include "novelty/mann_whitney.hpp"
#include "novelty/run_config.hpp"
#include "novelty/synthetic.hpp"
#include "novelty/text.hpp"
#include "novelty/validation.hpp"
#include "novelty/workspace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace novelty::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kLofTolerance = 1e-9;
constexpr double kMwuTolerance = 0.01;

// A command-level failure carrying its exit status.
struct Failure {
    int status;
    std::string message;
};

// String-typed flag storage; converted into a RunConfig after parsing.
struct ConfigFlags {
    RunConfig config;
    std::string rounding = "nearest";
    std::string tie_mode = "exact-k";
    std::string norm_scope = "landscape";
    std::string split_scope = "per-year";
    std::size_t pca_dim = 0;
    bool lenient = false;

    RunConfig resolve() const {
        RunConfig c = config;
        c.rounding = *rounding_from_name(rounding);
        c.tie_mode = *tie_mode_from_name(tie_mode);
        c.norm_scope = *norm_scope_from_name(norm_scope);
        c.split_scope = *split_scope_from_name(split_scope);
        if (pca_dim > 0) c.pca_dim = pca_dim;
        c.strict_embeddings = !lenient;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw Failure{kUsageError, e.what()};
        }
        return c;
    }
};

void add_scoring_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--k-fraction", f.config.k_fraction, "k as a fraction of the landscape size")
        ->capture_default_str();
    cmd->add_option("--k-min", f.config.k_min, "lower bound for k")->capture_default_str();
    cmd->add_option("--rounding", f.rounding, "k rounding")->check(CLI::IsMember({"nearest", "floor"}))->capture_default_str();
    cmd->add_option("--tie-mode", f.tie_mode, "neighbor tie handling")
        ->check(CLI::IsMember({"exact-k", "inclusive"}))
        ->capture_default_str();
    cmd->add_option("--norm-scope", f.norm_scope, "min-max population")
        ->check(CLI::IsMember({"landscape", "cohort"}))
        ->capture_default_str();
    cmd->add_option("--pca-dim", f.pca_dim, "reduce embeddings to this many principal components (0 = off)")
        ->capture_default_str();
    cmd->add_flag("--lenient-embeddings", f.lenient, "fall back to older model years for missing embeddings");
    cmd->add_option("--threads", f.config.threads, "worker threads (0 = hardware)")->capture_default_str();
    cmd->add_option("--precision", f.config.precision, "decimals in score CSVs")->capture_default_str();
}

void add_split_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--cutoff", f.config.cutoff, "fraction of each cohort marked novel")->capture_default_str();
    cmd->add_option("--split-scope", f.split_scope, "novel split population")
        ->check(CLI::IsMember({"per-year", "pooled"}))
        ->capture_default_str();
}

Corpus load_corpus(const Workspace& ws) {
    const fs::path path = ws.corpus_path();
    if (!fs::exists(path)) throw Failure{kUsageError, "no corpus at " + path.string() + " (run `ingest` first)"};
    std::ifstream in(path);
    ParseResult parsed = parse_proposals(in);
    if (!parsed.ok())
        throw Failure{kUsageError, path.string() + " line " + std::to_string(parsed.errors.front().line) + ": " +
                                       parsed.errors.front().message};
    return std::move(parsed.corpus);
}

void write_with_config(const fs::path& path, std::string_view content, const RunConfig& config) {
    atomic_write(path, content);
    atomic_write(config_sidecar_path(path), config.to_json());
}

std::string format_fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(std::string_view s, double& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> config_preamble(const RunConfig& config) {
    std::vector<std::string> lines;
    std::istringstream in(config.to_json());
    std::string line;
    lines.push_back("run config:");
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string input;
    std::string stopwords;
    int min_year = 1900;
    int max_year = 2100;
};

int cmd_ingest(const Workspace& ws, const IngestArgs& args, std::ostream& out, std::ostream& err) {
    WorkspaceLock lock(ws.root());

    std::ifstream in(args.input, std::ios::binary);
    if (!in) throw Failure{kUsageError, "cannot open " + args.input};

    ParseResult parsed;
    try {
        parsed = parse_proposals(in, {args.min_year, args.max_year});
    } catch (const DuplicateIdError& e) {
        throw Failure{kUsageError, std::string(e.what()) + " in " + args.input};
    }
    for (const auto& w : parsed.warnings) err << "warning: line " << w.line << ": " << w.message << '\n';
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << "error: line " << e.line << ": " << e.message << '\n';
        throw Failure{kUsageError, std::to_string(parsed.errors.size()) + " malformed record(s); nothing written"};
    }

    TextCleaningOptions cleaning;
    if (!args.stopwords.empty()) {
        std::ifstream sw(args.stopwords);
        if (!sw) throw Failure{kUsageError, "cannot open stopword file " + args.stopwords};
        cleaning.stopwords = load_stopwords(sw);
    }
    CleanedCorpus cleaned = clean_corpus(parsed.corpus, cleaning);
    for (const auto& e : cleaned.empty_components)
        err << "warning: " << e.doc_id << ": component '" << component_name(e.component) << "' is empty after cleaning\n";

    const Corpus& corpus = cleaned.corpus;
    if (corpus.empty()) err << "warning: empty corpus\n";

    ws.create_directories();
    std::ostringstream serialized;
    serialize_proposals(corpus, serialized);
    RunConfig config;
    write_with_config(ws.corpus_path(), serialized.str(), config);

    out << "records: " << corpus.size() << '\n';
    if (auto range = corpus.year_range()) {
        out << "years: " << range->first << "-" << range->second << '\n';
        std::map<int, std::size_t> totals;
        for (const auto& r : corpus.records()) ++totals[r.year];
        out << "year  new  total\n";
        for (const auto& [year, total] : totals) {
            auto it = corpus.year_index().find(year);
            std::size_t n_new = it == corpus.year_index().end() ? 0 : it->second.size();
            out << year << "  " << n_new << "  " << total << '\n';
        }
    } else {
        out << "years: none\n";
    }
    out << "written: " << ws.corpus_path().string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

std::vector<int> scoring_years(const Corpus& corpus, std::optional<int> year, bool all_years) {
    if (corpus.year_index().empty()) throw Failure{kRunError, "corpus has no new proposals"};
    if (year) return {*year};
    if (!all_years) throw Failure{kUsageError, "pass --year or --all-years"};
    std::vector<int> years;
    for (int y = corpus.year_index().begin()->first; y <= corpus.year_range()->second; ++y) years.push_back(y);
    return years;
}

YearScores score_one_year(const Workspace& ws, const Corpus& corpus, int year, const RunConfig& config,
                          std::ostream& out, std::ostream& err) {
    const LandscapeConfig lc = config.landscape_config();
    WorkspaceEmbeddings embeddings(ws);
    AnnualLandscape land;
    try {
        land = build_landscape(corpus, embeddings, year, lc);
    } catch (const LandscapeError& e) {
        throw Failure{kRunError, "year " + std::to_string(year) + ": " + e.what()};
    }
    for (const auto& s : land.substitutions)
        err << "warning: " << s.doc_id << "/" << component_name(s.component) << ": using model year "
            << s.used_model_year << " for " << year << '\n';

    out << "year " << year << ": members=" << land.member_ids.size() << " cohort=" << land.cohort_ids.size()
        << " k=" << land.k << '\n';

    YearScores scores = score_year(land, corpus, lc);
    std::ostringstream csv;
    write_scores_csv(scores, csv, config.precision);
    write_with_config(ws.scores_path(year), csv.str(), config);
    return scores;
}

int cmd_score(const Workspace& ws, std::optional<int> year, bool all_years, const RunConfig& config, std::ostream& out,
              std::ostream& err) {
    WorkspaceLock lock(ws.root());
    const Corpus corpus = load_corpus(ws);
    ws.create_directories();
    for (int y : scoring_years(corpus, year, all_years)) {
        score_one_year(ws, corpus, y, config, out, err);
        out << "written: " << ws.scores_path(y).string() << '\n';
    }
    return kOk;
}

int cmd_rescore(const Workspace& ws, std::optional<int> from, std::optional<int> to, const RunConfig& config,
                std::ostream& out, std::ostream& err) {
    WorkspaceLock lock(ws.root());
    const Corpus corpus = load_corpus(ws);
    ws.create_directories();

    std::vector<int> years = scoring_years(corpus, std::nullopt, true);
    const int first = from.value_or(years.front());
    const int last = to.value_or(years.back());
    if (first > last) throw Failure{kUsageError, "--from is after --to"};

    NoveltyMatrix matrix;
    for (int y = first; y <= last; ++y) {
        if (corpus.year_index().begin()->first > y) continue;
        matrix.add(score_one_year(ws, corpus, y, config, out, err));
    }

    std::ostringstream csv;
    write_matrix_csv(matrix, csv, config.precision);
    const fs::path path = ws.report_path("novelty_matrix.csv");
    write_with_config(path, csv.str(), config);
    out << "written: " << path.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Workspace& ws, std::optional<int> through_year, bool force_approx, const RunConfig& config,
                 std::ostream& out, std::ostream&) {
    WorkspaceLock lock(ws.root());
    const Corpus corpus = load_corpus(ws);
    if (corpus.year_index().empty()) throw Failure{kRunError, "corpus has no new proposals"};
    const int last = through_year.value_or(corpus.year_range()->second);

    std::map<int, std::vector<CohortScore>> cohorts;
    for (const auto& [year, ids] : corpus.year_index()) {
        if (year > last) break;
        const fs::path path = ws.scores_path(year);
        if (!fs::exists(path)) throw Failure{kRunError, "missing scores for year " + std::to_string(year) + " (" + path.string() + ")"};
        std::ifstream in(path);
        std::vector<ScoreRow> rows;
        try {
            rows = read_scores_csv(in);
        } catch (const std::runtime_error& e) {
            throw Failure{kRunError, path.string() + ": " + e.what()};
        }
        std::map<std::string, double> totals;
        for (const auto& r : rows) totals[r.doc_id] = r.total;
        auto& cohort = cohorts[year];
        for (const auto& id : ids) {
            auto it = totals.find(id);
            if (it == totals.end()) throw Failure{kRunError, path.string() + ": no score for cohort member " + id};
            cohort.push_back({id, it->second});
        }
    }

    GroupSplit split;
    try {
        split = split_novel(cohorts, config.cutoff, config.split_scope);
    } catch (const ValidationError& e) {
        throw Failure{kRunError, e.what()};
    }
    if (split.novel_ids.empty() || split.non_novel_ids.empty())
        throw Failure{kRunError, "empty group after split (novel " + std::to_string(split.novel_ids.size()) +
                                     ", non-novel " + std::to_string(split.non_novel_ids.size()) + ")"};

    MwuOptions options;
    options.force_approx = force_approx;
    ValidationReport report = validation_report(corpus, split, options);

    ws.create_directories();
    std::ostringstream csv, table;
    write_report_csv(report, csv);
    auto preamble = config_preamble(config);
    preamble.insert(preamble.begin(), "validation through " + std::to_string(last));
    write_report_table(report, table, preamble);

    write_with_config(ws.report_path("validation.csv"), csv.str(), config);
    write_with_config(ws.report_path("validation.txt"), table.str(), config);
    out << table.str();
    out << "written: " << ws.report_path("validation.csv").string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    std::string input;
    std::string scores;
    std::size_t k = 0;
    std::size_t cap = kDefaultOracleCap;
    bool force_approx = false;
};

int oracle_lof(const OracleArgs& args, const RunConfig& config, std::ostream& out) {
    EmbeddingMatrix matrix = [&] {
        try {
            return load_embeddings(args.input);
        } catch (const std::exception& e) {
            throw Failure{kUsageError, e.what()};
        }
    }();
    if (matrix.rows() > args.cap)
        throw Failure{kUsageError, "oracle cap exceeded: " + std::to_string(matrix.rows()) + " > " + std::to_string(args.cap)};
    if (matrix.rows() < 2) throw Failure{kUsageError, "need at least 2 points"};

    PointSet points(matrix);
    std::size_t k = args.k;
    if (k == 0) k = compute_k(points.size(), config.k_fraction, config.k_min, config.rounding);

    LofResult reference = lof_bruteforce_oracle(points, k, config.tie_mode, args.cap);

    std::vector<double> candidate;
    std::string label;
    if (!args.scores.empty()) {
        std::ifstream in(args.scores);
        if (!in) throw Failure{kUsageError, "cannot open " + args.scores};
        std::map<std::string, double> claimed;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || (line_no == 1 && line.rfind("doc_id", 0) == 0)) continue;
            auto fields = split_commas(line);
            double v = 0.0;
            if (fields.size() != 2 || !parse_double(fields[1], v))
                throw Failure{kCheckFailed, args.scores + " line " + std::to_string(line_no) + ": expected doc_id,lof"};
            claimed[fields[0]] = v;
        }
        for (const auto& id : points.ids()) {
            auto it = claimed.find(id);
            if (it == claimed.end()) throw Failure{kCheckFailed, args.scores + ": no score for " + id};
            candidate.push_back(it->second);
        }
        label = "claimed scores";
    } else {
        candidate = lof_batch(points, k, config.tie_mode, config.threads).lof;
        label = "lof_batch";
    }

    const double deviation = max_relative_deviation(candidate, reference.lof);
    out << "points=" << points.size() << " dim=" << points.dim() << " k=" << k << " tie_mode=" << tie_mode_name(config.tie_mode)
        << '\n';
    out << "max relative deviation (" << label << " vs brute-force oracle): " << std::setprecision(3) << deviation << '\n';
    if (deviation > kLofTolerance) {
        out << "FAIL: deviation above " << kLofTolerance << '\n';
        return kCheckFailed;
    }
    out << "OK\n";
    return kOk;
}

int oracle_mwu(const OracleArgs& args, std::ostream& out) {
    std::ifstream in(args.input);
    if (!in) throw Failure{kUsageError, "cannot open " + args.input};
    std::vector<std::string> labels;
    std::map<std::string, std::vector<double>> groups;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("group", 0) == 0)) continue;
        auto fields = split_commas(line);
        double v = 0.0;
        if (fields.size() != 2 || !parse_double(fields[1], v))
            throw Failure{kUsageError, args.input + " line " + std::to_string(line_no) + ": expected group,value"};
        if (!groups.contains(fields[0])) labels.push_back(fields[0]);
        groups[fields[0]].push_back(v);
    }
    if (labels.size() != 2) throw Failure{kUsageError, "expected exactly two groups, found " + std::to_string(labels.size())};
    const auto& a = groups[labels[0]];
    const auto& b = groups[labels[1]];
    if (a.size() + b.size() > kMwuOracleCap)
        throw Failure{kUsageError, "oracle cap exceeded: n = " + std::to_string(a.size() + b.size()) + " > " +
                                       std::to_string(kMwuOracleCap)};

    MwuOptions options;
    options.force_approx = args.force_approx;
    TestResult result = mann_whitney_u(a, b, options);
    const double reference = mwu_permutation_oracle(a, b);
    const double deviation = std::abs(result.p_value - reference);

    out << "groups: " << labels[0] << " (n=" << a.size() << "), " << labels[1] << " (n=" << b.size() << ")\n";
    out << "U=" << result.u_statistic << " p=" << std::setprecision(6) << result.p_value << " ("
        << mwu_method_name(result.method) << ")\n";
    out << "permutation oracle p=" << reference << '\n';
    out << "absolute p deviation: " << std::setprecision(3) << deviation << '\n';
    if (deviation > kMwuTolerance) {
        out << "FAIL: deviation above " << kMwuTolerance << '\n';
        return kCheckFailed;
    }
    out << "OK\n";
    return kOk;
}

// ---------------------------------------------------------------------------

std::string table_from_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream out;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << "  ";
            out << (i == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[i])) << r[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string report_corpus(const Corpus& corpus) {
    struct YearStats {
        std::size_t n_new = 0, n_total = 0;
        double funding_new = 0.0, funding_total = 0.0;
        std::size_t funded_new = 0, funded_total = 0;
    };
    std::map<int, YearStats> stats;
    for (const auto& r : corpus.records()) {
        auto& s = stats[r.year];
        ++s.n_total;
        if (r.funding) {
            s.funding_total += static_cast<double>(*r.funding);
            ++s.funded_total;
        }
        if (r.is_new) {
            ++s.n_new;
            if (r.funding) {
                s.funding_new += static_cast<double>(*r.funding);
                ++s.funded_new;
            }
        }
    }
    auto avg = [](double sum, std::size_t n) { return n ? format_fixed(sum / static_cast<double>(n), 0) : std::string("-"); };
    std::vector<std::vector<std::string>> rows{{"year", "new_proposals", "avg_funding_new", "total_proposals", "avg_funding_total"}};
    for (const auto& [year, s] : stats)
        rows.push_back({std::to_string(year), std::to_string(s.n_new), avg(s.funding_new, s.funded_new),
                        std::to_string(s.n_total), avg(s.funding_total, s.funded_total)});
    return table_from_rows(rows);
}

std::string report_scores(const Workspace& ws, const Corpus& corpus, int year, std::size_t top) {
    const fs::path path = ws.scores_path(year);
    if (!fs::exists(path)) throw Failure{kRunError, "missing scores for year " + std::to_string(year)};
    std::ifstream in(path);
    std::vector<ScoreRow> rows = read_scores_csv(in);
    std::erase_if(rows, [&](const ScoreRow& r) {
        const ProposalRecord* rec = corpus.find(r.doc_id);
        return !rec || !rec->is_new || rec->year != year;
    });
    std::stable_sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.doc_id < b.doc_id;
    });
    std::vector<std::vector<std::string>> table{
        {"doc_id", "year", "nov_title", "nov_objectives", "nov_contents", "nov_outcomes", "total_novelty"}};
    for (std::size_t i = 0; i < std::min(top, rows.size()); ++i) {
        const auto& r = rows[i];
        std::vector<std::string> cells{r.doc_id, std::to_string(year)};
        for (double v : r.normalized) cells.push_back(format_fixed(v, 4));
        cells.push_back(format_fixed(r.total, 4));
        table.push_back(std::move(cells));
    }
    return table_from_rows(table);
}

std::string report_matrix(const Workspace& ws) {
    const fs::path path = ws.report_path("novelty_matrix.csv");
    if (!fs::exists(path)) throw Failure{kRunError, "missing " + path.string() + " (run `rescore` first)"};
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        auto cells = split_commas(line);
        for (auto& c : cells)
            if (c.empty()) c = "-";
        rows.push_back(std::move(cells));
    }
    return table_from_rows(rows);
}

int cmd_report(const Workspace& ws, const std::string& kind, std::optional<int> year, std::size_t top, std::ostream& out) {
    WorkspaceLock lock(ws.root());
    std::string text;
    std::string name = kind;
    if (kind == "corpus") {
        text = report_corpus(load_corpus(ws));
    } else if (kind == "scores") {
        const Corpus corpus = load_corpus(ws);
        if (!year) throw Failure{kUsageError, "report scores needs --year"};
        text = report_scores(ws, corpus, *year, top);
        name = "scores_" + std::to_string(*year);
    } else if (kind == "matrix") {
        text = report_matrix(ws);
    } else {
        const fs::path path = ws.report_path("validation.txt");
        if (!fs::exists(path)) throw Failure{kRunError, "missing " + path.string() + " (run `validate` first)"};
        text = read_file(path);
        out << text;
        return kOk;
    }
    ws.create_directories();
    atomic_write(ws.report_path(name + ".txt"), text);
    out << text;
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_synth(const Workspace& ws, const SyntheticSpec& spec, std::ostream& out) {
    WorkspaceLock lock(ws.root());
    SyntheticData data = generate_synthetic(spec);
    ws.create_directories();

    std::ostringstream corpus;
    serialize_proposals(data.corpus, corpus);
    atomic_write(ws.corpus_path(), corpus.str());

    for (int y = spec.first_year; y < spec.first_year + spec.years; ++y) {
        for (auto tag : kAllComponents) {
            std::ostringstream bytes;
            write_embeddings(*data.embeddings.find(y, tag), bytes);
            atomic_write(ws.embedding_path(y, tag), bytes.str());
        }
    }
    std::ostringstream planted;
    for (const auto& [year, ids] : data.planted_outliers)
        for (const auto& id : ids) planted << year << ',' << id << '\n';
    atomic_write(ws.report_path("planted_outliers.csv"), "year,doc_id\n" + planted.str());

    out << "synthetic workspace: " << data.corpus.size() << " records, " << spec.years << " years, dim " << spec.dim
        << ", seed " << spec.seed << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Novelty scoring of research proposals over cumulative annual embedding landscapes", "novelty"};
    app.require_subcommand(1);

    std::string root;
    app.add_option("-w,--workspace", root, "workspace root directory")->envname("NOVELTY_WORKSPACE");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "validate, clean and persist a proposals file");
    ingest->add_option("-i,--input", ingest_args.input, "proposals file (one JSON object per line)")->required();
    ingest->add_option("--stopwords", ingest_args.stopwords, "stopword list, one per line");
    ingest->add_option("--min-year", ingest_args.min_year)->capture_default_str();
    ingest->add_option("--max-year", ingest_args.max_year)->capture_default_str();

    ConfigFlags score_flags;
    std::optional<int> score_year_opt;
    bool all_years = false;
    auto* score = app.add_subcommand("score", "score one or all years");
    auto* year_opt = score->add_option("--year", score_year_opt, "scoring year");
    score->add_flag("--all-years", all_years, "score every year")->excludes(year_opt);
    add_scoring_flags(score, score_flags);

    ConfigFlags rescore_flags;
    std::optional<int> from, to;
    auto* rescore = app.add_subcommand("rescore", "score a range of years and write the doc x year matrix");
    rescore->add_option("--from", from, "first scoring year");
    rescore->add_option("--to", to, "last scoring year");
    add_scoring_flags(rescore, rescore_flags);

    ConfigFlags validate_flags;
    std::optional<int> through_year;
    bool force_approx = false;
    auto* validate = app.add_subcommand("validate", "compare indicators of novel and non-novel proposals");
    validate->add_option("--through-year", through_year, "last selection year included");
    validate->add_flag("--force-approx", force_approx, "always use the normal approximation");
    add_split_flags(validate, validate_flags);

    ConfigFlags oracle_flags;
    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "cross-check optimized paths against brute-force oracles");
    oracle->require_subcommand(1);
    auto* oracle_lof_cmd = oracle->add_subcommand("lof", "lof_batch (or a score file) vs the O(n^2) oracle");
    oracle_lof_cmd->add_option("-i,--input", oracle_args.input, "EMB1 point file")->required();
    oracle_lof_cmd->add_option("--k", oracle_args.k, "neighborhood size (default: k rule)");
    oracle_lof_cmd->add_option("--scores", oracle_args.scores, "CSV doc_id,lof of claimed scores to check");
    oracle_lof_cmd->add_option("--cap", oracle_args.cap, "maximum points")->capture_default_str();
    add_scoring_flags(oracle_lof_cmd, oracle_flags);
    auto* oracle_mwu_cmd = oracle->add_subcommand("mwu", "Mann-Whitney p vs exhaustive permutation");
    oracle_mwu_cmd->add_option("-i,--input", oracle_args.input, "CSV group,value with two groups")->required();
    oracle_mwu_cmd->add_flag("--force-approx", oracle_args.force_approx, "check the normal approximation");

    std::string report_kind = "corpus";
    std::optional<int> report_year;
    std::size_t report_top = 10;
    auto* report = app.add_subcommand("report", "print and store plain-text summaries");
    report->add_option("kind", report_kind, "corpus | scores | matrix | validation")
        ->check(CLI::IsMember({"corpus", "scores", "matrix", "validation"}))
        ->capture_default_str();
    report->add_option("--year", report_year, "scoring year (scores)");
    report->add_option("--top", report_top, "rows to show (scores)")->capture_default_str();

    SyntheticSpec synth_spec;
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic workspace");
    synth->add_option("--first-year", synth_spec.first_year)->capture_default_str();
    synth->add_option("--years", synth_spec.years)->capture_default_str();
    synth->add_option("--docs-per-year", synth_spec.docs_per_year)->capture_default_str();
    synth->add_option("--continuation-per-year", synth_spec.continuation_per_year)->capture_default_str();
    synth->add_option("--outliers-per-year", synth_spec.outliers_per_year)->capture_default_str();
    synth->add_option("--dim", synth_spec.dim)->capture_default_str();
    synth->add_option("--clusters", synth_spec.clusters)->capture_default_str();
    synth->add_option("--tech-transfer-shift", synth_spec.tech_transfer_shift)->capture_default_str();
    synth->add_option("--seed", synth_spec.seed)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        int status = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return status == 0 ? kOk : kUsageError;
    }

    try {
        if (*oracle_lof_cmd) return oracle_lof(oracle_args, oracle_flags.resolve(), out);
        if (*oracle_mwu_cmd) return oracle_mwu(oracle_args, out);

        if (root.empty()) throw Failure{kUsageError, "no workspace: pass --workspace or set NOVELTY_WORKSPACE"};
        const Workspace ws{fs::path(root)};

        if (*ingest) return cmd_ingest(ws, ingest_args, out, err);
        if (*score) return cmd_score(ws, score_year_opt, all_years, score_flags.resolve(), out, err);
        if (*rescore) return cmd_rescore(ws, from, to, rescore_flags.resolve(), out, err);
        if (*validate) return cmd_validate(ws, through_year, force_approx, validate_flags.resolve(), out, err);
        if (*report) return cmd_report(ws, report_kind, report_year, report_top, out);
        if (*synth) return cmd_synth(ws, synth_spec, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.status;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRunError;
    }
    return kUsageError;
}

} // namespace novelty::cli
