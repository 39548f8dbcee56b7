#pragma once

#include "novelty/embedding_store.hpp"

#include <cstddef>
#include <vector>

namespace novelty {

struct PcaModel {
    std::size_t dim = 0;
    std::size_t n_components = 0;
    std::vector<double> mean;                     // dim
    std::vector<double> components;               // n_components x dim, row-major, orthonormal rows
    std::vector<double> explained_variance_ratio; // non-increasing

    std::span<const double> basis_vector(std::size_t i) const {
        return std::span<const double>(components).subspan(i * dim, dim);
    }
};

class PcaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Fits on all rows of `matrix`. Requires rows >= 2 and
// 1 <= n_components <= min(rows, dim). Each basis vector is signed so its
// largest-magnitude coordinate is positive.
PcaModel pca_fit(const EmbeddingMatrix& matrix, std::size_t n_components);

// Projects centered rows onto the basis; ids and model year are preserved.
EmbeddingMatrix pca_transform(const PcaModel& model, const EmbeddingMatrix& matrix);

} // namespace novelty
