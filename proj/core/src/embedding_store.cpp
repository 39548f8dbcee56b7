#include "novelty/embedding_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace novelty {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'B', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <typename T>
bool get_le(std::istream& in, T& value) {
    static_assert(std::is_unsigned_v<T>);
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
    value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(bytes[i]) << (8 * i));
    return true;
}

[[noreturn]] void fail(EmbeddingFormatError::Kind kind, const std::string& what) {
    throw EmbeddingFormatError(kind, what);
}

} // namespace

EmbeddingMatrix::EmbeddingMatrix(int model_year, ComponentTag component, std::size_t dim)
    : model_year_(model_year), component_(component), dim_(dim) {
    if (dim == 0) throw std::invalid_argument("embedding dim must be positive");
}

EmbeddingMatrix EmbeddingMatrix::from_rows(int model_year, ComponentTag component, std::size_t dim,
                                           std::vector<Row> rows) {
    EmbeddingMatrix m(model_year, component, dim);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.first < b.first; });
    m.ids_.reserve(rows.size());
    m.values_.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& [id, values] = rows[i];
        if (i > 0 && m.ids_.back() == id) throw std::invalid_argument("duplicate doc_id \"" + id + "\"");
        if (values.size() != dim)
            throw std::invalid_argument("row \"" + id + "\" has " + std::to_string(values.size()) +
                                        " values, expected " + std::to_string(dim));
        if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
            throw std::invalid_argument("row \"" + id + "\" has a non-finite value");
        m.ids_.push_back(std::move(id));
        m.values_.insert(m.values_.end(), values.begin(), values.end());
    }
    return m;
}

std::span<const double> EmbeddingMatrix::row(std::size_t index) const {
    return std::span<const double>(values_).subspan(index * dim_, dim_);
}

std::optional<std::span<const double>> EmbeddingMatrix::find(std::string_view doc_id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), doc_id);
    if (it == ids_.end() || *it != doc_id) return std::nullopt;
    return row(static_cast<std::size_t>(it - ids_.begin()));
}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const std::string> doc_ids) const {
    std::vector<Row> rows;
    rows.reserve(doc_ids.size());
    for (const auto& id : doc_ids) {
        auto r = find(id);
        if (!r) throw std::out_of_range("doc_id \"" + id + "\" not in embedding matrix");
        rows.emplace_back(id, std::vector<double>(r->begin(), r->end()));
    }
    return from_rows(model_year_, component_, dim_, std::move(rows));
}

bool EmbeddingMatrix::operator==(const EmbeddingMatrix& other) const {
    if (model_year_ != other.model_year_ || component_ != other.component_ || dim_ != other.dim_ ||
        ids_ != other.ids_ || values_.size() != other.values_.size())
        return false;
    return values_.empty() ||
           std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

EmbeddingFormatError::EmbeddingFormatError(Kind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

EmbeddingMatrix read_embeddings(std::istream& in) {
    using Kind = EmbeddingFormatError::Kind;

    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size())) fail(Kind::truncated, "EMB1: truncated header");
    if (magic != kMagic) fail(Kind::bad_magic, "EMB1: bad magic bytes");

    std::uint16_t version = 0, model_year = 0;
    std::uint8_t tag = 0, reserved = 0;
    std::uint32_t dim = 0;
    std::uint64_t count = 0;
    if (!get_le(in, version)) fail(Kind::truncated, "EMB1: truncated header");
    if (version != kEmbFormatVersion) fail(Kind::unsupported_version, "EMB1: unsupported version " + std::to_string(version));
    if (!get_le(in, model_year) || !get_le(in, tag) || !get_le(in, reserved) || !get_le(in, dim) || !get_le(in, count))
        fail(Kind::truncated, "EMB1: truncated header");

    auto component = component_from_code(tag);
    if (!component) fail(Kind::bad_header, "EMB1: component tag " + std::to_string(tag) + " out of range");
    if (reserved != 0) fail(Kind::bad_header, "EMB1: reserved byte must be 0");
    if (dim == 0) fail(Kind::bad_header, "EMB1: dim must be positive");

    std::vector<EmbeddingMatrix::Row> rows;
    rows.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
    std::vector<char> buffer(static_cast<std::size_t>(dim) * 4);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint16_t id_len = 0;
        if (!get_le(in, id_len))
            fail(Kind::truncated, "EMB1: truncated at record " + std::to_string(i) + " of " + std::to_string(count));
        std::string id(id_len, '\0');
        if (!in.read(id.data(), id_len) || !in.read(buffer.data(), static_cast<std::streamsize>(buffer.size())))
            fail(Kind::truncated, "EMB1: truncated at record " + std::to_string(i) + " of " + std::to_string(count));

        std::vector<double> values(dim);
        for (std::uint32_t j = 0; j < dim; ++j) {
            std::uint32_t bits = 0;
            for (int b = 0; b < 4; ++b)
                bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(buffer[j * 4 + b])) << (8 * b);
            float f = std::bit_cast<float>(bits);
            if (!std::isfinite(f)) fail(Kind::non_finite, "EMB1: non-finite value in record \"" + id + "\"");
            values[j] = static_cast<double>(f);
        }
        rows.emplace_back(std::move(id), std::move(values));
    }

    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            fail(Kind::duplicate_id, "EMB1: duplicate doc_id \"" + rows[i].first + "\"");

    return EmbeddingMatrix::from_rows(model_year, *component, dim, std::move(rows));
}

void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out) {
    if (matrix.model_year() < 0 || matrix.model_year() > std::numeric_limits<std::uint16_t>::max())
        throw std::invalid_argument("model year does not fit in u16");
    if (matrix.dim() > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("dim does not fit in u32");

    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint16_t>(out, kEmbFormatVersion);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(matrix.model_year()));
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(matrix.component()));
    put_le<std::uint8_t>(out, 0);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.dim()));
    put_le<std::uint64_t>(out, matrix.rows());

    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto& id = matrix.ids()[i];
        if (id.size() > std::numeric_limits<std::uint16_t>::max())
            throw std::invalid_argument("doc_id longer than 65535 bytes");
        put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        for (double v : matrix.row(i)) {
            auto f = static_cast<float>(v);
            if (!std::isfinite(f)) throw std::invalid_argument("value of \"" + id + "\" overflows float32");
            put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
        }
    }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_embeddings(in);
}

std::string embedding_file_name(int model_year, ComponentTag component) {
    return std::to_string(model_year) + "_" + std::string(component_name(component)) + ".emb";
}

} // namespace novelty
