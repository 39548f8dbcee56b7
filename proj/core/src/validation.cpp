#include "novelty/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>

namespace novelty {

namespace {

void take_top(std::vector<CohortScore> cohort, double cutoff, GroupSplit& split) {
    std::sort(cohort.begin(), cohort.end(), [](const CohortScore& a, const CohortScore& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.doc_id < b.doc_id;
    });
    const auto n_novel = static_cast<std::size_t>(std::floor(cutoff * static_cast<double>(cohort.size())));
    for (std::size_t i = 0; i < cohort.size(); ++i)
        (i < n_novel ? split.novel_ids : split.non_novel_ids).insert(cohort[i].doc_id);
}

std::string format_number(double v, int precision = 4) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string format_p(const ReportRow& row) {
    if (!row.test) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", row.test->p_value);
    return buf;
}

std::vector<std::string> row_cells(const ReportRow& row) {
    return {std::string(indicator_name(row.indicator)),
            std::to_string(row.novel.n),
            std::to_string(row.non_novel.n),
            format_number(row.novel.mean),
            format_number(row.novel.sd),
            format_number(row.non_novel.mean),
            format_number(row.non_novel.sd),
            row.test ? format_number(row.test->u_statistic, 1) : "NA",
            format_p(row),
            row.test ? std::string(mwu_method_name(row.test->method)) + (row.test->degenerate ? " (degenerate)" : "")
                     : "skipped: " + row.note};
}

} // namespace

std::string_view split_scope_name(SplitScope s) { return s == SplitScope::per_year ? "per-year" : "pooled"; }

std::optional<SplitScope> split_scope_from_name(std::string_view name) {
    if (name == "per-year") return SplitScope::per_year;
    if (name == "pooled") return SplitScope::pooled;
    return std::nullopt;
}

GroupSplit split_novel(const std::map<int, std::vector<CohortScore>>& cohorts, double cutoff, SplitScope scope) {
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw ValidationError("cutoff must be in (0,1)");

    GroupSplit split;
    split.cutoff = cutoff;
    split.scope = scope;

    std::size_t eligible = 0;
    std::set<std::string_view> seen;
    for (const auto& [year, members] : cohorts) {
        if (members.empty()) throw ValidationError("empty cohort for year " + std::to_string(year));
        eligible += members.size();
        for (const auto& m : members)
            if (!seen.insert(m.doc_id).second)
                throw ValidationError("doc_id \"" + m.doc_id + "\" appears in more than one cohort");
    }
    if (eligible == 0) throw ValidationError("no cohort scores to split");

    if (scope == SplitScope::per_year) {
        for (const auto& [year, members] : cohorts) take_top(members, cutoff, split);
    } else {
        std::vector<CohortScore> pooled;
        pooled.reserve(eligible);
        for (const auto& [year, members] : cohorts) pooled.insert(pooled.end(), members.begin(), members.end());
        take_top(std::move(pooled), cutoff, split);
    }
    return split;
}

std::vector<CohortScore> cohort_scores(const YearScores& scores) {
    std::vector<CohortScore> out;
    for (const auto* s : scores.cohort()) out.push_back({s->doc_id, s->total});
    return out;
}

std::string_view indicator_name(Indicator i) {
    switch (i) {
    case Indicator::duration: return "duration";
    case Indicator::funding: return "funding";
    case Indicator::papers: return "papers";
    case Indicator::tech_transfers: return "tech_transfers";
    case Indicator::domestic_patents: return "domestic_patents";
    case Indicator::foreign_patents: return "foreign_patents";
    }
    return "unknown";
}

std::optional<double> indicator_value(const ProposalRecord& r, Indicator indicator) {
    auto as_double = [](const std::optional<std::int64_t>& v) -> std::optional<double> {
        if (!v) return std::nullopt;
        return static_cast<double>(*v);
    };
    switch (indicator) {
    case Indicator::duration: return r.duration_years;
    case Indicator::funding: return as_double(r.funding);
    case Indicator::papers: return as_double(r.n_papers);
    case Indicator::tech_transfers: return as_double(r.n_tech_transfers);
    case Indicator::domestic_patents: return as_double(r.n_domestic_patents);
    case Indicator::foreign_patents: return as_double(r.n_foreign_patents);
    }
    return std::nullopt;
}

IndicatorSample collect_indicator(const Corpus& corpus, const GroupSplit& split, Indicator indicator) {
    IndicatorSample sample{indicator, {}, {}};
    auto collect = [&](const std::set<std::string>& ids, std::vector<double>& out) {
        for (const auto& id : ids) {
            const ProposalRecord* r = corpus.find(id);
            if (!r) continue;
            if (auto v = indicator_value(*r, indicator)) out.push_back(*v);
        }
    };
    collect(split.novel_ids, sample.novel);
    collect(split.non_novel_ids, sample.non_novel);
    return sample;
}

GroupStats group_stats(std::span<const double> values) {
    GroupStats g;
    g.n = values.size();
    if (g.n == 0) {
        g.mean = g.sd = std::numeric_limits<double>::quiet_NaN();
        return g;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    g.mean = sum / static_cast<double>(g.n);
    if (g.n < 2) {
        g.sd = std::numeric_limits<double>::quiet_NaN();
        return g;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - g.mean) * (v - g.mean);
    g.sd = std::sqrt(ss / static_cast<double>(g.n - 1));
    return g;
}

ValidationReport validation_report(const Corpus& corpus, const GroupSplit& split, const MwuOptions& options) {
    ValidationReport report;
    report.n_novel = split.novel_ids.size();
    report.n_non_novel = split.non_novel_ids.size();

    for (auto indicator : kAllIndicators) {
        IndicatorSample sample = collect_indicator(corpus, split, indicator);
        ReportRow row{indicator, group_stats(sample.novel), group_stats(sample.non_novel), std::nullopt, {}};
        if (sample.novel.empty() || sample.non_novel.empty()) {
            row.note = sample.novel.empty() ? "no novel observations" : "no non-novel observations";
        } else {
            row.test = mann_whitney_u(sample.novel, sample.non_novel, options);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_report_csv(const ValidationReport& report, std::ostream& out) {
    out << kReportCsvHeader << '\n';
    for (const auto& row : report.rows) {
        auto cells = row_cells(row);
        if (row.test) {
            // Full precision in the machine-readable form.
            char p[64];
            std::snprintf(p, sizeof p, "%.17g", row.test->p_value);
            cells[8] = p;
        }
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }
}

void write_report_table(const ValidationReport& report, std::ostream& out, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) out << "# " << line << '\n';
    out << "# novel proposals: " << report.n_novel << ", non-novel proposals: " << report.n_non_novel << '\n';

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header;
    {
        std::string h(kReportCsvHeader);
        std::size_t start = 0;
        for (std::size_t pos; (pos = h.find(',', start)) != std::string::npos; start = pos + 1)
            header.push_back(h.substr(start, pos - start));
        header.push_back(h.substr(start));
    }
    table.push_back(header);
    for (const auto& row : report.rows) table.push_back(row_cells(row));

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : table)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());

    for (const auto& r : table) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << "  ";
            if (i == 0 || i + 1 == r.size())
                out << std::left << std::setw(static_cast<int>(width[i])) << r[i];
            else
                out << std::right << std::setw(static_cast<int>(width[i])) << r[i];
        }
        out << '\n';
    }
}

} // namespace novelty
