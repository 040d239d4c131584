#include "mhpc/prediction_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mhpc {

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows) {}

void SparseBinaryMatrix::set(std::size_t row, LabelIndex col) {
    if (row >= rows_.size() || col >= cols_) {
        throw std::out_of_range("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                                ") outside " + std::to_string(rows_.size()) + "x" +
                                std::to_string(cols_) + " matrix");
    }
    auto& r = rows_[row];
    auto it = std::lower_bound(r.begin(), r.end(), col);
    if (it == r.end() || *it != col) r.insert(it, col);
}

bool SparseBinaryMatrix::get(std::size_t row, LabelIndex col) const {
    const auto& r = rows_.at(row);
    return std::binary_search(r.begin(), r.end(), col);
}

std::size_t SparseBinaryMatrix::nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

Matrix SparseBinaryMatrix::to_dense() const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows_.size()),
                              static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (LabelIndex k : rows_[i]) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0;
        }
    }
    return out;
}

SparseBinaryMatrix SparseBinaryMatrix::from_dense(const Matrix& dense) {
    SparseBinaryMatrix out(static_cast<std::size_t>(dense.rows()),
                           static_cast<std::size_t>(dense.cols()));
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index k = 0; k < dense.cols(); ++k) {
            const double v = dense(i, k);
            if (v == 1.0) {
                out.rows_[static_cast<std::size_t>(i)].push_back(static_cast<LabelIndex>(k));
            } else if (v != 0.0) {
                throw std::invalid_argument("binary matrix entries must be 0 or 1");
            }
        }
    }
    return out;
}

PredictionSet::PredictionSet(std::size_t n_instances, std::size_t n_labels)
    : n_instances_(n_instances), n_labels_(n_labels) {}

void PredictionSet::add_source(SparseBinaryMatrix y) {
    if (y.rows() != n_instances_ || y.cols() != n_labels_) {
        throw std::invalid_argument("source matrix is " + std::to_string(y.rows()) + "x" +
                                    std::to_string(y.cols()) + ", expected " +
                                    std::to_string(n_instances_) + "x" +
                                    std::to_string(n_labels_));
    }
    sources_.push_back(std::move(y));
}

}  // namespace mhpc
