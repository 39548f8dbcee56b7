#include "novelty/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

namespace novelty {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 14> kKnownFields = {
    "doc_id",   "year",           "is_new",  "classification_code", "title",
    "objectives", "contents",     "outcomes", "funding",            "duration_years",
    "n_papers", "n_domestic_patents", "n_foreign_patents", "n_tech_transfers"};

bool is_known_field(std::string_view name) {
    return std::find(kKnownFields.begin(), kKnownFields.end(), name) != kKnownFields.end();
}

// Field-level parse failure; caught per line and recorded as a ParseIssue.
struct FieldError {
    std::string message;
};

const json& required(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw FieldError{std::string("missing required field '") + name + "'"};
    return *it;
}

std::string required_string(const json& obj, const char* name) {
    const json& v = required(obj, name);
    if (!v.is_string()) throw FieldError{std::string("field '") + name + "' must be a string"};
    return v.get<std::string>();
}

std::optional<std::int64_t> optional_count(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_number_unsigned()) {
        auto v = it->get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(INT64_MAX))
            throw FieldError{std::string("field '") + name + "' is too large"};
        return static_cast<std::int64_t>(v);
    }
    if (it->is_number_integer()) {
        auto v = it->get<std::int64_t>();
        if (v < 0) throw FieldError{std::string("field '") + name + "' must be non-negative"};
        return v;
    }
    throw FieldError{std::string("field '") + name + "' must be a non-negative integer"};
}

std::optional<double> optional_nonnegative_number(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw FieldError{std::string("field '") + name + "' must be a number"};
    double v = it->get<double>();
    if (!std::isfinite(v) || v < 0.0)
        throw FieldError{std::string("field '") + name + "' must be a finite non-negative number"};
    return v;
}

ProposalRecord record_from_json(const json& obj, const ParseOptions& options) {
    if (!obj.is_object()) throw FieldError{"record is not an object"};

    ProposalRecord r;
    r.doc_id = required_string(obj, "doc_id");
    if (r.doc_id.empty()) throw FieldError{"doc_id is empty"};

    const json& year = required(obj, "year");
    if (!year.is_number_integer()) throw FieldError{"field 'year' must be an integer"};
    auto y = year.get<std::int64_t>();
    if (y < options.min_year || y > options.max_year)
        throw FieldError{"year " + std::to_string(y) + " outside [" + std::to_string(options.min_year) + ", " +
                         std::to_string(options.max_year) + "]"};
    r.year = static_cast<int>(y);

    const json& is_new = required(obj, "is_new");
    if (!is_new.is_boolean()) throw FieldError{"field 'is_new' must be a boolean"};
    r.is_new = is_new.get<bool>();

    if (auto it = obj.find("classification_code"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) throw FieldError{"field 'classification_code' must be a string"};
        r.classification_code = it->get<std::string>();
    }

    r.title = required_string(obj, "title");
    r.objectives = required_string(obj, "objectives");
    r.contents = required_string(obj, "contents");
    r.outcomes = required_string(obj, "outcomes");

    r.funding = optional_count(obj, "funding");
    r.duration_years = optional_nonnegative_number(obj, "duration_years");
    r.n_papers = optional_count(obj, "n_papers");
    r.n_domestic_patents = optional_count(obj, "n_domestic_patents");
    r.n_foreign_patents = optional_count(obj, "n_foreign_patents");
    r.n_tech_transfers = optional_count(obj, "n_tech_transfers");
    return r;
}

nlohmann::ordered_json record_to_json(const ProposalRecord& r) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = r.doc_id;
    obj["year"] = r.year;
    obj["is_new"] = r.is_new;
    if (r.classification_code) obj["classification_code"] = *r.classification_code;
    obj["title"] = r.title;
    obj["objectives"] = r.objectives;
    obj["contents"] = r.contents;
    obj["outcomes"] = r.outcomes;
    if (r.funding) obj["funding"] = *r.funding;
    if (r.duration_years) obj["duration_years"] = *r.duration_years;
    if (r.n_papers) obj["n_papers"] = *r.n_papers;
    if (r.n_domestic_patents) obj["n_domestic_patents"] = *r.n_domestic_patents;
    if (r.n_foreign_patents) obj["n_foreign_patents"] = *r.n_foreign_patents;
    if (r.n_tech_transfers) obj["n_tech_transfers"] = *r.n_tech_transfers;
    return obj;
}

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

} // namespace

const std::string& ProposalRecord::text(ComponentTag tag) const {
    switch (tag) {
    case ComponentTag::title: return title;
    case ComponentTag::objectives: return objectives;
    case ComponentTag::contents: return contents;
    case ComponentTag::outcomes: return outcomes;
    }
    throw std::invalid_argument("unknown component tag");
}

std::string& ProposalRecord::text(ComponentTag tag) {
    return const_cast<std::string&>(std::as_const(*this).text(tag));
}

DuplicateIdError::DuplicateIdError(std::string doc_id)
    : std::runtime_error("duplicate doc_id \"" + doc_id + "\""), doc_id_(std::move(doc_id)) {}

Corpus::Corpus(std::vector<ProposalRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(), [](const ProposalRecord& a, const ProposalRecord& b) {
        if (a.year != b.year) return a.year < b.year;
        return a.doc_id < b.doc_id;
    });

    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.doc_id.empty()) throw std::invalid_argument("record with empty doc_id");
        if (!by_id_.emplace(r.doc_id, i).second) throw DuplicateIdError(r.doc_id);
    }

    // Records are already ordered by (year, doc_id), so each list is ascending.
    for (const auto& r : records_)
        if (r.is_new) year_index_[r.year].push_back(r.doc_id);
}

const ProposalRecord* Corpus::find(std::string_view doc_id) const {
    auto it = by_id_.find(doc_id);
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::optional<std::pair<int, int>> Corpus::year_range() const {
    if (records_.empty()) return std::nullopt;
    return std::pair{records_.front().year, records_.back().year};
}

ParseResult parse_proposals(std::istream& in, const ParseOptions& options) {
    ParseResult result;
    std::vector<ProposalRecord> records;
    std::map<std::string, std::size_t> first_line;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            result.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
            continue;
        }

        ProposalRecord record;
        try {
            record = record_from_json(obj, options);
        } catch (const FieldError& e) {
            result.errors.push_back({line_no, e.message});
            continue;
        } catch (const json::exception& e) {
            result.errors.push_back({line_no, e.what()});
            continue;
        }

        for (const auto& [key, value] : obj.items())
            if (!is_known_field(key)) result.warnings.push_back({line_no, "unknown field '" + key + "' ignored"});

        if (!first_line.emplace(record.doc_id, line_no).second) throw DuplicateIdError(record.doc_id);
        records.push_back(std::move(record));
    }

    result.corpus = Corpus(std::move(records));
    return result;
}

void serialize_proposals(const Corpus& corpus, std::ostream& out) {
    for (const auto& r : corpus.records()) out << record_to_json(r).dump() << '\n';
}

std::vector<std::string> select_new_cohort(const Corpus& corpus, int year) {
    auto range = corpus.year_range();
    if (!range || year < range->first || year > range->second)
        throw YearOutOfRangeError("year " + std::to_string(year) + " outside the corpus year range");
    auto it = corpus.year_index().find(year);
    if (it == corpus.year_index().end()) return {};
    return it->second;
}

Corpus filter_by_classification(const Corpus& corpus, std::string_view code_prefix) {
    if (code_prefix.empty()) return corpus;
    std::vector<ProposalRecord> kept;
    for (const auto& r : corpus.records())
        if (r.classification_code && r.classification_code->starts_with(code_prefix)) kept.push_back(r);
    return Corpus(std::move(kept));
}

} // namespace novelty
