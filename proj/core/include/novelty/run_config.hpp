#pragma once

#include "novelty/landscape.hpp"
#include "novelty/lof.hpp"
#include "novelty/validation.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace novelty {

// Every knob that influences an output file. Serialized next to each output.
struct RunConfig {
    double k_fraction = 0.01;
    std::size_t k_min = 2;
    Rounding rounding = Rounding::nearest;
    TieMode tie_mode = TieMode::exact_k;
    NormScope norm_scope = NormScope::landscape;
    double cutoff = 0.10;
    SplitScope split_scope = SplitScope::per_year;
    std::optional<std::size_t> pca_dim;
    bool strict_embeddings = true;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    int precision = 4;

    // Throws std::invalid_argument naming the first offending field.
    void validate() const;

    LandscapeConfig landscape_config() const;

    // Pretty-printed JSON. `threads` is omitted: outputs do not depend on it.
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);

    bool operator==(const RunConfig&) const = default;
};

} // namespace novelty
