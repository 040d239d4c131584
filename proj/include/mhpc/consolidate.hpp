#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mhpc/hierarchy.hpp"
#include "mhpc/prediction_set.hpp"
#include "mhpc/similarity.hpp"
#include "mhpc/support.hpp"

namespace mhpc {

enum class SupportMode { hierarchical, uniform };

struct ConsolidationConfig {
    double lambda = 10.0;
    /// When empty, sigma is the median nonzero weighted distance of the simple
    /// average, computed once and then frozen.
    std::optional<double> sigma_override;
    double alpha = kDefaultAlpha;
    int max_iters = 50;
    /// Stop once the Frobenius norm of the update drops below this.
    double tol = 1e-4;
    SupportMode support_mode = SupportMode::hierarchical;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double delta_fro = 0.0;
};

struct ConsolidationResult {
    Matrix y_hat;
    Matrix y_bar;
    /// Record 0 is the closed-form initialization; records 1.. are loop steps.
    std::vector<IterationRecord> trace;
    int iterations_run = 0;
    bool converged = false;
    double sigma = 1.0;
    Vector support;
    /// Similarity graph behind the last solve; empty for N < 2.
    SimilarityGraph graph;
};

class ConsolidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Entrywise mean of the M source matrices. Throws for an empty set.
Matrix simple_average(const PredictionSet& preds);

/// Simple average with column k scaled by support weight S_k.
Matrix weighted_average(const PredictionSet& preds, const SupportVector& support);

/// J = (1/M) sum_m ||Y_hat - Y_m||_F^2 + lambda tr(Y_hat^T L Y_hat).
double objective(const Matrix& y_hat, const PredictionSet& preds, const LaplacianMatrix& lap,
                 double lambda);
double objective(const Matrix& y_hat, const PredictionSet& preds, const SimilarityGraph& g,
                 double lambda);

/// dJ/dY_hat = (1/M) sum_m (2 Y_hat - 2 Y_m) + 2 lambda L Y_hat.
Matrix objective_gradient(const Matrix& y_hat, const PredictionSet& preds,
                          const LaplacianMatrix& lap, double lambda);
Matrix objective_gradient(const Matrix& y_hat, const PredictionSet& preds,
                          const SimilarityGraph& g, double lambda);

/// Solves (I + lambda L) X = y_in with a Cholesky factorization. lambda = 0
/// returns y_in unchanged.
Matrix closed_form_consolidate(const Matrix& y_in, const LaplacianMatrix& lap, double lambda);

/// Two-phase consolidation with the given per-label support weights.
ConsolidationResult consolidate_with_support(const PredictionSet& preds, const Vector& support,
                                             const ConsolidationConfig& cfg);

/// Hierarchical support from augmented occurrences (cfg.support_mode is
/// honoured, so uniform mode reproduces mpc_u).
ConsolidationResult mhpc(const PredictionSet& preds, const LabelHierarchy& h,
                         const ConsolidationConfig& cfg);

/// Same pipeline with every support weight equal to 1.
ConsolidationResult mpc_u(const PredictionSet& preds, const ConsolidationConfig& cfg);

}  // namespace mhpc
