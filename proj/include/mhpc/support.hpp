#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mhpc/hierarchy.hpp"
#include "mhpc/prediction_set.hpp"

namespace mhpc {

inline constexpr double kDefaultAlpha = 0.05;

/// Per-label activation counts over every augmented label vector of every
/// source.
struct OccurrenceVector {
    std::vector<std::uint64_t> counts;
};

/// Per-label weights from the lower end of the beta-quantile confidence
/// interval on the activation proportion.
struct SupportVector {
    std::vector<double> weights;
    double alpha = kDefaultAlpha;

    Vector as_vector() const;
};

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified Lentz),
/// evaluated on the side of the symmetry point where it converges quickly.
double regularized_incomplete_beta(double x, double a, double b);

/// Inverse of I_x(a, b) in x: safeguarded Newton iteration inside a shrinking
/// bisection bracket. Requires 0 < p < 1 and positive finite shapes.
double beta_quantile(double p, double a, double b);

OccurrenceVector occurrence_vector(const PredictionSet& preds, const LabelHierarchy& h);

/// S_k = beta_quantile(alpha/2, c, N - c + 1) with c = min(C_k, N); S_k = 0
/// when C_k = 0. Throws std::invalid_argument for N = 0 or alpha outside (0, 1).
SupportVector support_vector(const OccurrenceVector& occurrences, std::size_t n_instances,
                             double alpha = kDefaultAlpha);

}  // namespace mhpc
