#pragma once

#include "novelty/component.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace novelty {

struct ProposalRecord {
    std::string doc_id;
    int year = 0;
    bool is_new = true;
    std::optional<std::string> classification_code;
    std::string title;
    std::string objectives;
    std::string contents;
    std::string outcomes;
    // Optional numeric fields; std::nullopt means "unknown".
    std::optional<std::int64_t> funding;
    std::optional<double> duration_years;
    std::optional<std::int64_t> n_papers;
    std::optional<std::int64_t> n_domestic_patents;
    std::optional<std::int64_t> n_foreign_patents;
    std::optional<std::int64_t> n_tech_transfers;

    const std::string& text(ComponentTag tag) const;
    std::string& text(ComponentTag tag);

    bool operator==(const ProposalRecord&) const = default;
};

class DuplicateIdError : public std::runtime_error {
public:
    explicit DuplicateIdError(std::string doc_id);
    const std::string& doc_id() const noexcept { return doc_id_; }

private:
    std::string doc_id_;
};

class YearOutOfRangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Immutable, ordered by (year, doc_id). year_index lists the doc_ids of newly
// selected (is_new) records per year, ascending.
class Corpus {
public:
    Corpus() = default;
    // Throws DuplicateIdError on a repeated doc_id and std::invalid_argument on
    // an empty doc_id.
    explicit Corpus(std::vector<ProposalRecord> records);

    const std::vector<ProposalRecord>& records() const noexcept { return records_; }
    const std::map<int, std::vector<std::string>>& year_index() const noexcept { return year_index_; }

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    const ProposalRecord* find(std::string_view doc_id) const;

    // Inclusive range of selection years over all records; nullopt when empty.
    std::optional<std::pair<int, int>> year_range() const;

    bool operator==(const Corpus& other) const { return records_ == other.records_; }

private:
    std::vector<ProposalRecord> records_;
    std::map<int, std::vector<std::string>> year_index_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct ParseOptions {
    int min_year = 1900;
    int max_year = 2100;
};

struct ParseIssue {
    std::size_t line = 0; // 1-based
    std::string message;
};

struct ParseResult {
    Corpus corpus;
    std::vector<ParseIssue> errors;   // malformed records, skipped
    std::vector<ParseIssue> warnings; // e.g. unknown fields

    bool ok() const noexcept { return errors.empty(); }
};

// Reads the proposals line format (one JSON object per line, blank lines
// ignored). Malformed lines are collected; a duplicate doc_id throws
// DuplicateIdError.
ParseResult parse_proposals(std::istream& in, const ParseOptions& options = {});

// Writes one line per record in corpus order. parse_proposals(serialize) is
// the identity on any valid corpus.
void serialize_proposals(const Corpus& corpus, std::ostream& out);

// New (non-continuation) doc_ids selected in `year`, ascending. Throws
// YearOutOfRangeError when `year` lies outside the corpus year range.
std::vector<std::string> select_new_cohort(const Corpus& corpus, int year);

// Records whose classification_code starts with `code_prefix`. An empty prefix
// keeps everything, including records without a code.
Corpus filter_by_classification(const Corpus& corpus, std::string_view code_prefix);

} // namespace novelty
