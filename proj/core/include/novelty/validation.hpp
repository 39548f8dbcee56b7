#pragma once

#include "novelty/corpus.hpp"
#include "novelty/landscape.hpp"
#include "novelty/mann_whitney.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace novelty {

enum class SplitScope { per_year, pooled };

std::string_view split_scope_name(SplitScope s);
std::optional<SplitScope> split_scope_from_name(std::string_view name);

// A cohort member's total novelty in its selection year.
struct CohortScore {
    std::string doc_id;
    double total = 0.0;
};

struct GroupSplit {
    std::set<std::string> novel_ids;
    std::set<std::string> non_novel_ids;
    double cutoff = 0.10;
    SplitScope scope = SplitScope::per_year;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Marks the floor(cutoff * n) highest totals as novel, per year or pooled.
// Boundary ties go to the ascending doc_id. Throws ValidationError for a
// cutoff outside (0, 1) or an empty cohort.
GroupSplit split_novel(const std::map<int, std::vector<CohortScore>>& cohorts, double cutoff = 0.10,
                       SplitScope scope = SplitScope::per_year);

std::vector<CohortScore> cohort_scores(const YearScores& scores);

enum class Indicator { duration, funding, papers, tech_transfers, domestic_patents, foreign_patents };

inline constexpr std::array<Indicator, 6> kAllIndicators = {
    Indicator::duration,         Indicator::funding,          Indicator::papers,
    Indicator::tech_transfers,   Indicator::domestic_patents, Indicator::foreign_patents};

std::string_view indicator_name(Indicator i);

// Indicator value of a record; nullopt when unknown.
std::optional<double> indicator_value(const ProposalRecord& record, Indicator indicator);

struct IndicatorSample {
    Indicator indicator;
    std::vector<double> novel;
    std::vector<double> non_novel;
};

// Collects known values for both groups; ids missing from the corpus are
// skipped.
IndicatorSample collect_indicator(const Corpus& corpus, const GroupSplit& split, Indicator indicator);

struct GroupStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; // divisor n - 1; NaN when n < 2
};

GroupStats group_stats(std::span<const double> values);

struct ReportRow {
    Indicator indicator;
    GroupStats novel;
    GroupStats non_novel;
    std::optional<TestResult> test; // absent when a group has no observations
    std::string note;
};

struct ValidationReport {
    std::size_t n_novel = 0;
    std::size_t n_non_novel = 0;
    std::vector<ReportRow> rows;
};

ValidationReport validation_report(const Corpus& corpus, const GroupSplit& split,
                                   const MwuOptions& options = {});

inline constexpr std::string_view kReportCsvHeader =
    "indicator,n_novel,n_non_novel,mean_novel,sd_novel,mean_non_novel,sd_non_novel,U,p_value,method";

void write_report_csv(const ValidationReport& report, std::ostream& out);
// Aligned plain-text table; `preamble` lines are emitted first, each prefixed
// with "# ".
void write_report_table(const ValidationReport& report, std::ostream& out,
                        const std::vector<std::string>& preamble = {});

} // namespace novelty
