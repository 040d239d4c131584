#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "mhpc/hierarchy.hpp"
#include "mhpc/prediction_set.hpp"

namespace mhpc {

/// Recorded in generated file headers so a corpus can be regenerated exactly.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64+seed_seq(seed_lo,seed_hi,source)";

struct GenConfig {
    std::size_t n_sources = 4;
    double alpha_vague = 0.8;
    double alpha_noise = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// alpha_vague^level: a label at this level stays put when p_V <= this value.
double vagueness_prob(int level, double alpha_vague);

/// Deterministic stream for one source, derived from (seed, source index).
/// Only fully specified standard components are used, so streams are identical
/// across standard libraries.
class SourceStream {
public:
    SourceStream(std::uint64_t seed, std::size_t source);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on {0, ..., n-1} by rejection; n > 0.
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

struct VaguenessOutcome {
    LabelIndex label;
    int hops = 0;
    /// Whether the hop condition fired at the starting label, even when the
    /// root boundary blocked the move.
    bool triggered = false;
};

/// Hops toward the root while p_v > alpha_vague^level(current), reusing the
/// same p_v at every level. Stops at a top-level label, never at the root.
VaguenessOutcome apply_vagueness(LabelIndex k, const LabelHierarchy& h, double alpha_vague,
                                 double p_v);

struct CorruptedLabel {
    LabelIndex label;
    int hops = 0;
    bool vagueness_triggered = false;
    bool noise_triggered = false;
    bool swapped = false;
};

/// Draws (p_V, p_N) from the stream, applies vagueness, then replaces the label
/// with a uniformly chosen sibling when p_N > alpha_noise and a sibling exists.
CorruptedLabel corrupt_label(LabelIndex k, const LabelHierarchy& h, double alpha_vague,
                             double alpha_noise, SourceStream& stream);

/// One corrupted copy of the ground truth per source. Sources are independent
/// streams, so the result does not depend on evaluation order.
PredictionSet generate_predictions(const SparseBinaryMatrix& truth, const LabelHierarchy& h,
                                   const GenConfig& cfg);

}  // namespace mhpc
