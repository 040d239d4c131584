#include "mhpc/hierarchy.hpp"

#include <algorithm>

namespace mhpc {

namespace {

constexpr int kUnvisited = 0;
constexpr int kOnStack = -1;

}  // namespace

LabelHierarchy LabelHierarchy::build(std::size_t num_labels, std::span<const HierarchyEdge> edges) {
    LabelHierarchy h;
    h.parent_.assign(num_labels, kRoot);
    h.children_.assign(num_labels, {});
    h.depth_.assign(num_labels, kUnvisited);

    std::vector<bool> assigned(num_labels, false);
    for (const auto& e : edges) {
        if (e.child >= num_labels) {
            throw HierarchyError("hierarchy edge child index " + std::to_string(e.child) +
                                 " out of range (K=" + std::to_string(num_labels) + ")");
        }
        if (e.parent != kRoot && e.parent >= num_labels) {
            throw HierarchyError("hierarchy edge parent index " + std::to_string(e.parent) +
                                 " out of range (K=" + std::to_string(num_labels) + ")");
        }
        if (e.parent == e.child) {
            throw HierarchyError("cycle: label " + std::to_string(e.child) + " is its own parent");
        }
        if (assigned[e.child]) {
            throw HierarchyError("duplicate parent assignment for label " + std::to_string(e.child));
        }
        assigned[e.child] = true;
        h.parent_[e.child] = e.parent;
    }
    for (LabelIndex k = 0; k < num_labels; ++k) {
        if (!assigned[k]) {
            throw HierarchyError("orphan label " + std::to_string(k) + " has no path to ROOT");
        }
    }

    // Depths by walking up with an explicit path; a label met twice on the
    // same walk closes a cycle.
    std::vector<LabelIndex> path;
    for (LabelIndex start = 0; start < num_labels; ++start) {
        if (h.depth_[start] != kUnvisited) continue;
        path.clear();
        LabelIndex t = start;
        int base = 0;
        while (true) {
            if (t == kRoot) break;
            if (h.depth_[t] == kOnStack) {
                throw HierarchyError("cycle detected through label " + std::to_string(t));
            }
            if (h.depth_[t] != kUnvisited) {
                base = h.depth_[t];
                break;
            }
            h.depth_[t] = kOnStack;
            path.push_back(t);
            t = h.parent_[t];
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            h.depth_[*it] = ++base;
        }
    }

    for (LabelIndex k = 0; k < num_labels; ++k) {
        if (h.parent_[k] == kRoot) {
            h.top_level_.push_back(k);
        } else {
            h.children_[h.parent_[k]].push_back(k);
        }
        h.max_depth_ = std::max(h.max_depth_, h.depth_[k]);
    }
    return h;
}

void LabelHierarchy::check_index(LabelIndex k) const {
    if (k >= parent_.size()) {
        throw std::out_of_range("label index " + std::to_string(k) + " out of range (K=" +
                                std::to_string(parent_.size()) + ")");
    }
}

LabelIndex LabelHierarchy::parent(LabelIndex k) const {
    check_index(k);
    return parent_[k];
}

const std::vector<LabelIndex>& LabelHierarchy::children(LabelIndex k) const {
    check_index(k);
    return children_[k];
}

int LabelHierarchy::depth(LabelIndex k) const {
    check_index(k);
    return depth_[k];
}

std::vector<LabelIndex> LabelHierarchy::siblings(LabelIndex k) const {
    check_index(k);
    const auto& group = parent_[k] == kRoot ? top_level_ : children_[parent_[k]];
    std::vector<LabelIndex> out;
    out.reserve(group.empty() ? 0 : group.size() - 1);
    for (LabelIndex s : group) {
        if (s != k) out.push_back(s);
    }
    return out;
}

std::vector<LabelIndex> LabelHierarchy::ancestors(LabelIndex k) const {
    check_index(k);
    std::vector<LabelIndex> out;
    for (LabelIndex t = parent_[k]; t != kRoot; t = parent_[t]) out.push_back(t);
    return out;
}

bool LabelHierarchy::is_ancestor(LabelIndex ancestor, LabelIndex k) const {
    check_index(ancestor);
    check_index(k);
    for (LabelIndex t = parent_[k]; t != kRoot; t = parent_[t]) {
        if (t == ancestor) return true;
    }
    return false;
}

LabelVector augment(const LabelVector& v, const LabelHierarchy& h) {
    if (v.size() != h.num_labels()) {
        throw std::invalid_argument("label vector length " + std::to_string(v.size()) +
                                    " does not match hierarchy size " +
                                    std::to_string(h.num_labels()));
    }
    LabelVector out(v.size(), 0);
    for (LabelIndex k = 0; k < v.size(); ++k) {
        if (v[k] > 1) throw std::invalid_argument("label vector entries must be 0 or 1");
        if (v[k] == 0) continue;
        // Stop early once we reach a label already marked: its ancestors are too.
        for (LabelIndex t = k; t != kRoot && !out[t]; t = h.parent(t)) out[t] = 1;
    }
    return out;
}

std::vector<LabelIndex> augment_labels(std::span<const LabelIndex> labels, const LabelHierarchy& h) {
    std::vector<LabelIndex> out;
    for (LabelIndex k : labels) {
        for (LabelIndex t = k; t != kRoot; t = h.parent(t)) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace mhpc
