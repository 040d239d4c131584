#include "mhpc/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mhpc {

Matrix weighted_distances(const Matrix& y, const Vector& support) {
    if (support.size() != y.cols()) {
        throw std::invalid_argument("support vector has " + std::to_string(support.size()) +
                                    " entries for " + std::to_string(y.cols()) + " labels");
    }
    if (!y.allFinite()) throw std::invalid_argument("label matrix has non-finite entries");
    const Eigen::Index n = y.rows();
    Matrix dist = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double sq = (support.array() * (y.row(i) - y.row(j)).transpose().array().square()).sum();
            dist(i, j) = dist(j, i) = std::sqrt(sq);
        }
    }
    return dist;
}

double median_bandwidth(const Matrix& distances) {
    std::vector<double> values;
    for (Eigen::Index i = 0; i < distances.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < distances.cols(); ++j) {
            if (distances(i, j) > 0.0) values.push_back(distances(i, j));
        }
    }
    if (values.empty()) return 1.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

SimilarityGraph pairwise_similarity(const Matrix& y, const Vector& support, double sigma) {
    if (!(std::isfinite(sigma) && sigma > 0.0)) {
        throw std::invalid_argument("similarity bandwidth sigma must be positive, got " +
                                    std::to_string(sigma));
    }
    SimilarityGraph g;
    g.sigma = sigma;
    g.weights = (-weighted_distances(y, support).array() / sigma).exp().matrix();
    g.weights.diagonal().setZero();
    g.degree = g.weights.rowwise().sum();
    return g;
}

LaplacianMatrix normalized_laplacian(const SimilarityGraph& g) {
    const Eigen::Index n = g.weights.rows();
    Vector inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(g.degree(i) > 0.0)) {
            throw GraphError("isolated vertex " + std::to_string(i) + " has zero degree");
        }
        inv_sqrt(i) = 1.0 / std::sqrt(g.degree(i));
    }
    LaplacianMatrix lap{Matrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // The scale product commutes, so L stays exactly symmetric.
            const double off = g.weights(i, j) * (inv_sqrt(i) * inv_sqrt(j));
            lap.entries(i, j) = (i == j ? 1.0 : 0.0) - off;
        }
    }
    return lap;
}

}  // namespace mhpc
