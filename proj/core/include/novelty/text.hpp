#pragma once

#include "novelty/component.hpp"
#include "novelty/corpus.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace novelty {

struct TextCleaningOptions {
    std::set<std::string> stopwords;
    // Code points treated as special characters. When unset, every Unicode
    // punctuation (P*) and symbol (S*) character is special.
    std::optional<std::u32string> special_chars;
};

// NFC-normalizes `raw`, drops control characters, replaces special characters
// with a separator, removes stopword tokens and collapses whitespace.
// Idempotent.
std::string preprocess_text(std::string_view raw, const TextCleaningOptions& options = {});

// One stopword per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_stopwords(std::istream& in);

struct EmptyComponent {
    std::string doc_id;
    ComponentTag component;
};

struct CleanedCorpus {
    Corpus corpus;
    std::vector<EmptyComponent> empty_components;
};

// Applies preprocess_text to every component of every record. Components that
// end up empty are kept and reported.
CleanedCorpus clean_corpus(const Corpus& corpus, const TextCleaningOptions& options = {});

} // namespace novelty
