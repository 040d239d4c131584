#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mhpc/hierarchy.hpp"

namespace mhpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Binary N x K matrix stored as one sorted, duplicate-free label list per row.
class SparseBinaryMatrix {
public:
    SparseBinaryMatrix() = default;
    SparseBinaryMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    /// Idempotent: setting an already-set entry is a no-op.
    void set(std::size_t row, LabelIndex col);
    bool get(std::size_t row, LabelIndex col) const;

    std::span<const LabelIndex> row(std::size_t i) const { return rows_.at(i); }
    std::size_t nonzeros() const;

    Matrix to_dense() const;
    static SparseBinaryMatrix from_dense(const Matrix& dense);

    friend bool operator==(const SparseBinaryMatrix&, const SparseBinaryMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<std::vector<LabelIndex>> rows_;
};

/// Label matrices Y_1..Y_M from M sources over a shared N x K grid.
class PredictionSet {
public:
    PredictionSet(std::size_t n_instances, std::size_t n_labels);

    /// Throws std::invalid_argument if the shape differs from (N, K).
    void add_source(SparseBinaryMatrix y);

    std::size_t n_sources() const { return sources_.size(); }
    std::size_t n_instances() const { return n_instances_; }
    std::size_t n_labels() const { return n_labels_; }

    const SparseBinaryMatrix& source(std::size_t m) const { return sources_.at(m); }
    const std::vector<SparseBinaryMatrix>& sources() const { return sources_; }

    friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

private:
    std::size_t n_instances_;
    std::size_t n_labels_;
    std::vector<SparseBinaryMatrix> sources_;
};

}  // namespace mhpc
