#pragma once

// Random problem generators shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include "mhpc/hierarchy.hpp"
#include "mhpc/prediction_set.hpp"
#include "oracle/reference_metrics.hpp"
#include "oracle/reference_pipeline.hpp"

namespace mhpc::testing {

/// Random tree: each label's parent is ROOT or an earlier label.
inline LabelHierarchy random_hierarchy(std::size_t k, std::mt19937_64& rng) {
    std::vector<HierarchyEdge> edges;
    for (std::size_t c = 0; c < k; ++c) {
        std::uniform_int_distribution<std::size_t> pick(0, c);
        const std::size_t p = pick(rng);
        edges.push_back({c, p == c ? kRoot : p});
    }
    return LabelHierarchy::build(k, edges);
}

/// Balanced tree with the given branching per level, labels numbered
/// breadth-first.
inline LabelHierarchy balanced_hierarchy(const std::vector<std::size_t>& branching) {
    std::vector<HierarchyEdge> edges;
    std::vector<LabelIndex> frontier{kRoot};
    std::size_t next = 0;
    for (std::size_t fan : branching) {
        std::vector<LabelIndex> level;
        for (LabelIndex p : frontier) {
            for (std::size_t c = 0; c < fan; ++c) {
                edges.push_back({next, p});
                level.push_back(next++);
            }
        }
        frontier = std::move(level);
    }
    return LabelHierarchy::build(next, edges);
}

inline SparseBinaryMatrix random_binary(std::size_t n, std::size_t k, double density,
                                        std::mt19937_64& rng) {
    std::bernoulli_distribution bit(density);
    SparseBinaryMatrix y(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (LabelIndex c = 0; c < k; ++c) {
            if (bit(rng)) y.set(i, c);
        }
    }
    return y;
}

inline PredictionSet random_predictions(std::size_t m, std::size_t n, std::size_t k,
                                        double density, std::mt19937_64& rng) {
    PredictionSet preds(n, k);
    for (std::size_t s = 0; s < m; ++s) preds.add_source(random_binary(n, k, density, rng));
    return preds;
}

inline oracle::Dense to_dense_rows(const Matrix& m) {
    oracle::Dense out(static_cast<std::size_t>(m.rows()),
                      std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
        }
    }
    return out;
}

inline oracle::Truth to_truth_rows(const SparseBinaryMatrix& z) {
    oracle::Truth out(z.rows(), std::vector<int>(z.cols(), 0));
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (LabelIndex k : z.row(i)) out[i][k] = 1;
    }
    return out;
}

inline std::vector<int> parent_array(const LabelHierarchy& h) {
    std::vector<int> parent(h.num_labels());
    for (LabelIndex k = 0; k < h.num_labels(); ++k) {
        parent[k] = h.parent(k) == kRoot ? -1 : static_cast<int>(h.parent(k));
    }
    return parent;
}

struct Corpus {
    LabelHierarchy hierarchy;
    SparseBinaryMatrix truth;
};

/// Ground truth with latent structure: instances draw from a small set of
/// prototype leaf sets, perturb them, and are closed under ancestors (every
/// true label's ancestors are also true).
inline Corpus clustered_corpus(std::size_t n_instances, std::uint64_t seed) {
    // 4 x 4 x 6: 4 + 16 + 96 = 116 labels over three levels.
    Corpus c{balanced_hierarchy({4, 4, 6}), {}};
    const auto& h = c.hierarchy;
    std::vector<LabelIndex> leaves;
    for (LabelIndex k = 0; k < h.num_labels(); ++k) {
        if (h.children(k).empty()) leaves.push_back(k);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_leaf(0, leaves.size() - 1);
    constexpr std::size_t kPrototypes = 12;
    std::vector<std::vector<LabelIndex>> prototypes(kPrototypes);
    for (auto& proto : prototypes) {
        for (int j = 0; j < 3; ++j) proto.push_back(leaves[pick_leaf(rng)]);
    }
    std::uniform_int_distribution<std::size_t> pick_proto(0, kPrototypes - 1);
    std::bernoulli_distribution perturb(0.15);
    std::bernoulli_distribution extra(0.2);

    c.truth = SparseBinaryMatrix(n_instances, h.num_labels());
    for (std::size_t i = 0; i < n_instances; ++i) {
        std::vector<LabelIndex> chosen = prototypes[pick_proto(rng)];
        for (auto& leaf : chosen) {
            if (!perturb(rng)) continue;
            const auto sibs = h.siblings(leaf);
            std::uniform_int_distribution<std::size_t> pick_sib(0, sibs.size() - 1);
            leaf = sibs[pick_sib(rng)];
        }
        if (extra(rng)) chosen.push_back(leaves[pick_leaf(rng)]);
        for (LabelIndex k : augment_labels(chosen, h)) c.truth.set(i, k);
    }
    return c;
}

}  // namespace mhpc::testing
