#include "mhpc/consolidate.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

namespace mhpc {

namespace {

void check_shape(const Matrix& y_hat, const PredictionSet& preds) {
    if (static_cast<std::size_t>(y_hat.rows()) != preds.n_instances() ||
        static_cast<std::size_t>(y_hat.cols()) != preds.n_labels()) {
        throw std::invalid_argument("consolidation matrix is " + std::to_string(y_hat.rows()) +
                                    "x" + std::to_string(y_hat.cols()) + ", predictions are " +
                                    std::to_string(preds.n_instances()) + "x" +
                                    std::to_string(preds.n_labels()));
    }
    if (preds.n_sources() == 0) throw std::invalid_argument("prediction set has no sources");
    if (!y_hat.allFinite()) throw std::invalid_argument("consolidation matrix has non-finite entries");
}

void check_lambda(double lambda) {
    if (!(std::isfinite(lambda) && lambda >= 0.0)) {
        throw std::invalid_argument("lambda must be finite and nonnegative, got " +
                                    std::to_string(lambda));
    }
}

// Factorization of I + lambda L, reused across all K right-hand sides.
class ShiftedSolver {
public:
    ShiftedSolver(const LaplacianMatrix& lap, double lambda) : lambda_(lambda) {
        if (lambda_ == 0.0) return;
        const Eigen::Index n = lap.entries.rows();
        llt_.compute(Matrix::Identity(n, n) + lambda_ * lap.entries);
        if (llt_.info() != Eigen::Success) {
            throw ConsolidationError("Cholesky factorization of I + lambda L failed; the Laplacian is not positive semidefinite");
        }
    }

    Matrix solve(const Matrix& rhs) const {
        if (lambda_ == 0.0) return rhs;
        Matrix x = llt_.solve(rhs);
        if (!x.allFinite()) throw ConsolidationError("linear solve produced non-finite values");
        return x;
    }

private:
    double lambda_;
    Eigen::LLT<Matrix> llt_;
};

double data_term(const Matrix& y_hat, const PredictionSet& preds) {
    double total = 0.0;
    for (const auto& y : preds.sources()) total += (y_hat - y.to_dense()).squaredNorm();
    return total / static_cast<double>(preds.n_sources());
}

}  // namespace

void ConsolidationConfig::validate() const {
    check_lambda(lambda);
    if (sigma_override && !(std::isfinite(*sigma_override) && *sigma_override > 0.0)) {
        throw std::invalid_argument("sigma must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (!(std::isfinite(tol) && tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

Matrix simple_average(const PredictionSet& preds) {
    if (preds.n_sources() == 0) throw std::invalid_argument("prediction set has no sources");
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(preds.n_instances()),
                              static_cast<Eigen::Index>(preds.n_labels()));
    for (const auto& y : preds.sources()) {
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (LabelIndex k : y.row(i)) {
                sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) += 1.0;
            }
        }
    }
    return sum / static_cast<double>(preds.n_sources());
}

Matrix weighted_average(const PredictionSet& preds, const SupportVector& support) {
    if (support.weights.size() != preds.n_labels()) {
        throw std::invalid_argument("support vector has " + std::to_string(support.weights.size()) +
                                    " entries for " + std::to_string(preds.n_labels()) + " labels");
    }
    Matrix avg = simple_average(preds);
    return avg * support.as_vector().asDiagonal();
}

double objective(const Matrix& y_hat, const PredictionSet& preds, const LaplacianMatrix& lap,
                 double lambda) {
    check_shape(y_hat, preds);
    check_lambda(lambda);
    if (lap.entries.rows() != y_hat.rows() || lap.entries.cols() != y_hat.rows()) {
        throw std::invalid_argument("Laplacian size does not match the instance count");
    }
    const double smooth = (y_hat.transpose() * lap.entries * y_hat).trace();
    return data_term(y_hat, preds) + lambda * smooth;
}

double objective(const Matrix& y_hat, const PredictionSet& preds, const SimilarityGraph& g,
                 double lambda) {
    return objective(y_hat, preds, normalized_laplacian(g), lambda);
}

Matrix objective_gradient(const Matrix& y_hat, const PredictionSet& preds,
                          const LaplacianMatrix& lap, double lambda) {
    check_shape(y_hat, preds);
    check_lambda(lambda);
    if (lap.entries.rows() != y_hat.rows() || lap.entries.cols() != y_hat.rows()) {
        throw std::invalid_argument("Laplacian size does not match the instance count");
    }
    return 2.0 * (y_hat - simple_average(preds)) + 2.0 * lambda * (lap.entries * y_hat);
}

Matrix objective_gradient(const Matrix& y_hat, const PredictionSet& preds,
                          const SimilarityGraph& g, double lambda) {
    return objective_gradient(y_hat, preds, normalized_laplacian(g), lambda);
}

Matrix closed_form_consolidate(const Matrix& y_in, const LaplacianMatrix& lap, double lambda) {
    check_lambda(lambda);
    if (lap.entries.rows() != y_in.rows() || lap.entries.cols() != y_in.rows()) {
        throw std::invalid_argument("Laplacian size does not match the instance count");
    }
    return ShiftedSolver(lap, lambda).solve(y_in);
}

ConsolidationResult consolidate_with_support(const PredictionSet& preds, const Vector& support,
                                             const ConsolidationConfig& cfg) {
    cfg.validate();
    if (preds.n_sources() == 0) throw std::invalid_argument("prediction set has no sources");
    if (static_cast<std::size_t>(support.size()) != preds.n_labels()) {
        throw std::invalid_argument("support vector length does not match label count");
    }

    ConsolidationResult result;
    result.support = support;
    result.y_bar = simple_average(preds);

    if (preds.n_instances() < 2) {
        // No pairwise term exists; the average is already optimal.
        result.y_hat = result.y_bar;
        result.trace.push_back({0, data_term(result.y_hat, preds), 0.0});
        result.converged = true;
        return result;
    }

    result.sigma = cfg.sigma_override
                       ? *cfg.sigma_override
                       : median_bandwidth(weighted_distances(result.y_bar, support));

    SimilarityGraph graph = pairwise_similarity(result.y_bar, support, result.sigma);
    LaplacianMatrix lap = normalized_laplacian(graph);
    std::optional<ShiftedSolver> solver(std::in_place, lap, cfg.lambda);

    Matrix y_hat = solver->solve(result.y_bar);
    result.trace.push_back({0, objective(y_hat, preds, lap, cfg.lambda),
                            (y_hat - result.y_bar).norm()});

    for (int t = 1; t <= cfg.max_iters; ++t) {
        // This step smooths with L_t; W_{t+1} is rebuilt from the estimate it
        // starts from.
        Matrix next = solver->solve(y_hat);
        if (!next.allFinite()) {
            throw ConsolidationError("non-finite consolidation values at iteration " +
                                     std::to_string(t));
        }
        const double delta = (next - y_hat).norm();
        result.trace.push_back({t, objective(next, preds, lap, cfg.lambda), delta});
        result.iterations_run = t;
        if (delta < cfg.tol) result.converged = true;
        if (result.converged || t == cfg.max_iters) {
            y_hat = std::move(next);
            break;
        }
        graph = pairwise_similarity(y_hat, support, result.sigma);
        lap = normalized_laplacian(graph);
        solver.emplace(lap, cfg.lambda);
        y_hat = std::move(next);
    }
    result.graph = std::move(graph);
    result.y_hat = std::move(y_hat);
    return result;
}

ConsolidationResult mhpc(const PredictionSet& preds, const LabelHierarchy& h,
                         const ConsolidationConfig& cfg) {
    if (cfg.support_mode == SupportMode::uniform) return mpc_u(preds, cfg);
    cfg.validate();
    const SupportVector s =
        support_vector(occurrence_vector(preds, h), preds.n_instances(), cfg.alpha);
    return consolidate_with_support(preds, s.as_vector(), cfg);
}

ConsolidationResult mpc_u(const PredictionSet& preds, const ConsolidationConfig& cfg) {
    return consolidate_with_support(
        preds, Vector::Ones(static_cast<Eigen::Index>(preds.n_labels())), cfg);
}

}  // namespace mhpc
