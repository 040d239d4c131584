#pragma once

#include <cstddef>
#include <stdexcept>

#include "mhpc/prediction_set.hpp"

namespace mhpc {

// Ranking metrics of a score matrix against binary ground truth. Tied scores
// earn half credit in pairwise comparisons; coverage takes the pessimistic
// rank inside a tie group.

struct MetricsReport {
    double ranking_loss = 0.0;
    double micro_auc = 0.0;
    double coverage_error = 0.0;
    /// Instances without both a positive and a negative label.
    std::size_t skipped = 0;
};

class MetricsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mean over instances with >= 1 positive and >= 1 negative of
/// (misordered + 0.5 tied) / (#pos * #neg).
double ranking_loss(const Matrix& scores, const SparseBinaryMatrix& truth,
                    std::size_t* skipped = nullptr);

/// Fraction of (positive entry, negative entry) pairs over the whole grid won
/// by the positive, ties counting one half.
double micro_auc(const Matrix& scores, const SparseBinaryMatrix& truth);

/// Mean over instances with >= 1 positive of the 1-indexed rank of the
/// lowest-scored true label.
double coverage_error(const Matrix& scores, const SparseBinaryMatrix& truth,
                      std::size_t* skipped = nullptr);

MetricsReport evaluate(const Matrix& scores, const SparseBinaryMatrix& truth);

}  // namespace mhpc
