#include "novelty/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <istream>
#include <stdexcept>

namespace novelty {

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw std::runtime_error("ICU NFC normalizer unavailable");
    return *n;
}

bool is_separator_control(UChar32 c) {
    return c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_special(UChar32 c, const TextCleaningOptions& options) {
    if (options.special_chars) return options.special_chars->find(static_cast<char32_t>(c)) != std::u32string::npos;
    switch (u_charType(c)) {
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
        return true;
    default:
        return false;
    }
}

} // namespace

std::string preprocess_text(std::string_view raw, const TextCleaningOptions& options) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString normalized =
        nfc().normalize(icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size()))),
                        status);
    if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");

    // Map every code point to kept / separator / dropped, then split on
    // separators.
    std::vector<std::string> tokens;
    icu::UnicodeString current;
    auto flush = [&] {
        if (current.isEmpty()) return;
        // Dropping a format character can leave a decomposed sequence, so each
        // token is normalized again before the stopword check.
        UErrorCode token_status = U_ZERO_ERROR;
        icu::UnicodeString composed = nfc().normalize(current, token_status);
        current.remove();
        if (U_FAILURE(token_status)) throw std::runtime_error("NFC normalization failed");
        std::string token;
        composed.toUTF8String(token);
        if (!options.stopwords.contains(token)) tokens.push_back(std::move(token));
    };

    for (int32_t i = 0; i < normalized.length();) {
        UChar32 c = normalized.char32At(i);
        i = normalized.moveIndex32(i, 1);

        if (u_isUWhiteSpace(c) || is_separator_control(c)) {
            flush();
            continue;
        }
        auto type = u_charType(c);
        if (type == U_CONTROL_CHAR || type == U_FORMAT_CHAR) continue;
        if (is_special(c, options)) {
            flush();
            continue;
        }
        current.append(c);
    }
    flush();

    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }

    return out;
}

std::set<std::string> load_stopwords(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        words.insert(line.substr(first, last - first + 1));
    }
    return words;
}

CleanedCorpus clean_corpus(const Corpus& corpus, const TextCleaningOptions& options) {
    std::vector<ProposalRecord> records = corpus.records();
    std::vector<EmptyComponent> empties;
    for (auto& r : records) {
        for (auto tag : kAllComponents) {
            auto& text = r.text(tag);
            text = preprocess_text(text, options);
            if (text.empty()) empties.push_back({r.doc_id, tag});
        }
    }
    return {Corpus(std::move(records)), std::move(empties)};
}

} // namespace novelty
