#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhpc {

using LabelIndex = std::size_t;

/// Parent sentinel for top-level labels. The root is virtual and never one of
/// the K labels.
inline constexpr LabelIndex kRoot = std::numeric_limits<LabelIndex>::max();

class HierarchyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct HierarchyEdge {
    LabelIndex child;
    LabelIndex parent;  // kRoot for a top-level label
};

/// Dense binary indicator vector over the K labels.
using LabelVector = std::vector<std::uint8_t>;

/// Rooted label tree (a forest of top-level labels hung off a virtual root).
/// Immutable after construction.
class LabelHierarchy {
public:
    /// Builds the tree from one edge per label. Throws HierarchyError on
    /// out-of-range indices, duplicate parent assignment, cycles, or labels
    /// without an edge.
    static LabelHierarchy build(std::size_t num_labels, std::span<const HierarchyEdge> edges);

    std::size_t num_labels() const { return parent_.size(); }

    /// kRoot for top-level labels.
    LabelIndex parent(LabelIndex k) const;
    const std::vector<LabelIndex>& children(LabelIndex k) const;
    const std::vector<LabelIndex>& top_level() const { return top_level_; }

    /// Number of edges from k to the root; top-level labels have depth 1.
    int depth(LabelIndex k) const;
    int max_depth() const { return max_depth_; }

    /// Labels sharing k's parent, excluding k itself, in ascending order.
    std::vector<LabelIndex> siblings(LabelIndex k) const;

    /// Strict ancestors of k, nearest first (the root is not included).
    std::vector<LabelIndex> ancestors(LabelIndex k) const;

    bool is_ancestor(LabelIndex ancestor, LabelIndex k) const;

private:
    void check_index(LabelIndex k) const;

    std::vector<LabelIndex> parent_;
    std::vector<std::vector<LabelIndex>> children_;
    std::vector<LabelIndex> top_level_;
    std::vector<int> depth_;
    int max_depth_ = 0;
};

/// Sets every ancestor of every active label. Throws std::invalid_argument on a
/// length mismatch or non-binary entry.
LabelVector augment(const LabelVector& v, const LabelHierarchy& h);

/// Sparse form: the sorted set of labels active after augmenting `labels`.
std::vector<LabelIndex> augment_labels(std::span<const LabelIndex> labels, const LabelHierarchy& h);

}  // namespace mhpc
