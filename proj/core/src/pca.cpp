#include "novelty/pca.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace novelty {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> as_eigen(const EmbeddingMatrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.dim())};
}

} // namespace

PcaModel pca_fit(const EmbeddingMatrix& matrix, std::size_t n_components) {
    const std::size_t n = matrix.rows();
    const std::size_t dim = matrix.dim();
    if (n < 2) throw PcaError("PCA needs at least 2 rows, got " + std::to_string(n));
    if (n_components == 0 || n_components > std::min(n, dim))
        throw PcaError("n_components must be in [1, " + std::to_string(std::min(n, dim)) + "]");

    auto x = as_eigen(matrix);
    Eigen::RowVectorXd mean = x.colwise().mean();
    RowMatrix centered = x.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw PcaError("eigendecomposition failed");

    // Eigenvalues ascend; take them from the back.
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    double total = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) total += std::max(values[i], 0.0);

    PcaModel model;
    model.dim = dim;
    model.n_components = n_components;
    model.mean.assign(mean.data(), mean.data() + dim);
    model.components.resize(n_components * dim);
    model.explained_variance_ratio.resize(n_components);

    for (std::size_t c = 0; c < n_components; ++c) {
        Eigen::Index col = values.size() - 1 - static_cast<Eigen::Index>(c);
        Eigen::VectorXd v = vectors.col(col);

        Eigen::Index largest = 0;
        for (Eigen::Index j = 1; j < v.size(); ++j)
            if (std::abs(v[j]) > std::abs(v[largest])) largest = j;
        if (v[largest] < 0) v = -v;

        std::copy(v.data(), v.data() + dim, model.components.begin() + static_cast<std::ptrdiff_t>(c * dim));
        model.explained_variance_ratio[c] = total > 0.0 ? std::max(values[col], 0.0) / total : 0.0;
    }
    return model;
}

EmbeddingMatrix pca_transform(const PcaModel& model, const EmbeddingMatrix& matrix) {
    if (matrix.dim() != model.dim)
        throw PcaError("dim mismatch: model " + std::to_string(model.dim) + ", matrix " + std::to_string(matrix.dim()));

    Eigen::Map<const RowMatrix> basis(model.components.data(), static_cast<Eigen::Index>(model.n_components),
                                      static_cast<Eigen::Index>(model.dim));
    Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(model.dim));

    RowMatrix coords = (as_eigen(matrix).rowwise() - mean) * basis.transpose();

    std::vector<EmbeddingMatrix::Row> rows;
    rows.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const double* r = coords.data() + i * model.n_components;
        rows.emplace_back(matrix.ids()[i], std::vector<double>(r, r + model.n_components));
    }
    return EmbeddingMatrix::from_rows(matrix.model_year(), matrix.component(), model.n_components, std::move(rows));
}

} // namespace novelty
