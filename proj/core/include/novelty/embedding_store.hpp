#pragma once

#include "novelty/component.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace novelty {

// Dense matrix of component embeddings for one (model_year, component).
// Rows are kept sorted by doc_id; entries are finite. Values are held as
// doubles in memory and persisted as float32 in EMB1.
class EmbeddingMatrix {
public:
    using Row = std::pair<std::string, std::vector<double>>;

    EmbeddingMatrix(int model_year, ComponentTag component, std::size_t dim);

    // Validates dim, finiteness and id uniqueness, then sorts rows by doc_id.
    // Throws std::invalid_argument on violation.
    static EmbeddingMatrix from_rows(int model_year, ComponentTag component, std::size_t dim,
                                     std::vector<Row> rows);

    int model_year() const noexcept { return model_year_; }
    ComponentTag component() const noexcept { return component_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::span<const double> row(std::size_t index) const;
    std::optional<std::span<const double>> find(std::string_view doc_id) const;
    // Row-major rows() x dim() buffer.
    std::span<const double> data() const noexcept { return values_; }

    // Sub-matrix restricted to `doc_ids` (any order, all must be present).
    EmbeddingMatrix select(std::span<const std::string> doc_ids) const;

    // Bitwise comparison of header fields, ids and values.
    bool operator==(const EmbeddingMatrix& other) const;

private:
    int model_year_;
    ComponentTag component_;
    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<double> values_;
};

class EmbeddingFormatError : public std::runtime_error {
public:
    enum class Kind {
        bad_magic,
        unsupported_version,
        bad_header,
        truncated,
        non_finite,
        duplicate_id,
    };

    EmbeddingFormatError(Kind kind, const std::string& what);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline constexpr std::uint16_t kEmbFormatVersion = 1;

// EMB1 reader. Records may appear in any order; the returned matrix is sorted.
EmbeddingMatrix read_embeddings(std::istream& in);

// EMB1 writer; output is deterministic (records sorted by doc_id). Throws
// std::invalid_argument if the model year does not fit in u16 or an id is
// longer than 65535 bytes.
void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

// Workspace file name: "<model_year>_<component>.emb".
std::string embedding_file_name(int model_year, ComponentTag component);

} // namespace novelty
