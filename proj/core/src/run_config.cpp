#include "novelty/run_config.hpp"

#include <json.hpp>

#include <stdexcept>

namespace novelty {

using nlohmann::ordered_json;

void RunConfig::validate() const {
    if (!(k_fraction > 0.0 && k_fraction < 1.0)) throw std::invalid_argument("k_fraction must be in (0,1)");
    if (k_min < 2) throw std::invalid_argument("k_min must be at least 2");
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("cutoff must be in (0,1)");
    if (pca_dim && *pca_dim == 0) throw std::invalid_argument("pca_dim must be positive");
    if (precision < 0 || precision > 17) throw std::invalid_argument("precision must be in [0,17]");
}

LandscapeConfig RunConfig::landscape_config() const {
    LandscapeConfig c;
    c.k_fraction = k_fraction;
    c.k_min = k_min;
    c.rounding = rounding;
    c.tie_mode = tie_mode;
    c.norm_scope = norm_scope;
    c.pca_dim = pca_dim;
    c.strict_embeddings = strict_embeddings;
    c.threads = threads;
    return c;
}

std::string RunConfig::to_json() const {
    ordered_json j;
    j["k_fraction"] = k_fraction;
    j["k_min"] = k_min;
    j["rounding"] = rounding_name(rounding);
    j["tie_mode"] = tie_mode_name(tie_mode);
    j["norm_scope"] = norm_scope_name(norm_scope);
    j["cutoff"] = cutoff;
    j["split_scope"] = split_scope_name(split_scope);
    j["pca_dim"] = pca_dim ? ordered_json(*pca_dim) : ordered_json(nullptr);
    j["strict_embeddings"] = strict_embeddings;
    j["seed"] = seed;
    j["precision"] = precision;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
    auto j = ordered_json::parse(text);
    RunConfig c;
    auto parse_enum = [](auto parsed, std::string_view field) {
        if (!parsed) throw std::invalid_argument("bad value for " + std::string(field));
        return *parsed;
    };
    c.k_fraction = j.value("k_fraction", c.k_fraction);
    c.k_min = j.value("k_min", c.k_min);
    if (j.contains("rounding")) c.rounding = parse_enum(rounding_from_name(j["rounding"].get<std::string>()), "rounding");
    if (j.contains("tie_mode")) c.tie_mode = parse_enum(tie_mode_from_name(j["tie_mode"].get<std::string>()), "tie_mode");
    if (j.contains("norm_scope"))
        c.norm_scope = parse_enum(norm_scope_from_name(j["norm_scope"].get<std::string>()), "norm_scope");
    c.cutoff = j.value("cutoff", c.cutoff);
    if (j.contains("split_scope"))
        c.split_scope = parse_enum(split_scope_from_name(j["split_scope"].get<std::string>()), "split_scope");
    if (j.contains("pca_dim") && !j["pca_dim"].is_null()) c.pca_dim = j["pca_dim"].get<std::size_t>();
    c.strict_embeddings = j.value("strict_embeddings", c.strict_embeddings);
    c.seed = j.value("seed", c.seed);
    c.precision = j.value("precision", c.precision);
    c.validate();
    return c;
}

} // namespace novelty
