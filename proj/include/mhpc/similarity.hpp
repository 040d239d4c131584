#pragma once

#include <stdexcept>

#include "mhpc/prediction_set.hpp"

namespace mhpc {

/// Instance similarity W with its degree vector. W is symmetric with a zero
/// diagonal and entries in [0, 1].
struct SimilarityGraph {
    Matrix weights;
    Vector degree;
    double sigma = 1.0;
};

/// Symmetric normalized Laplacian I - D^{-1/2} W D^{-1/2}.
struct LaplacianMatrix {
    Matrix entries;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Support-weighted Euclidean distances between all row pairs of y.
Matrix weighted_distances(const Matrix& y, const Vector& support);

/// Median of the nonzero off-diagonal distances (each unordered pair once).
/// Returns 1 when every distance is zero.
double median_bandwidth(const Matrix& distances);

/// W_ij = exp(-d_ij / sigma) for i != j, W_ii = 0.
SimilarityGraph pairwise_similarity(const Matrix& y, const Vector& support, double sigma);

/// Throws GraphError for an isolated vertex.
LaplacianMatrix normalized_laplacian(const SimilarityGraph& g);

}  // namespace mhpc
