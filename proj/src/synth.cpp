#include "mhpc/synth.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mhpc {

void GenConfig::validate() const {
    if (n_sources == 0) throw std::invalid_argument("at least one source is required");
    if (!(alpha_vague > 0.0 && alpha_vague <= 1.0)) {
        throw std::invalid_argument("alpha_vague must lie in (0, 1], got " + std::to_string(alpha_vague));
    }
    if (!(alpha_noise > 0.0 && alpha_noise <= 1.0)) {
        throw std::invalid_argument("alpha_noise must lie in (0, 1], got " + std::to_string(alpha_noise));
    }
}

double vagueness_prob(int level, double alpha_vague) {
    return std::pow(alpha_vague, level);
}

SourceStream::SourceStream(std::uint64_t seed, std::size_t source) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(source)};
    engine_.seed(seq);
}

double SourceStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t SourceStream::index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

VaguenessOutcome apply_vagueness(LabelIndex k, const LabelHierarchy& h, double alpha_vague,
                                 double p_v) {
    VaguenessOutcome out{k};
    while (p_v > vagueness_prob(h.depth(out.label), alpha_vague)) {
        if (out.hops == 0) out.triggered = true;
        const LabelIndex up = h.parent(out.label);
        if (up == kRoot) break;
        out.label = up;
        ++out.hops;
    }
    return out;
}

CorruptedLabel corrupt_label(LabelIndex k, const LabelHierarchy& h, double alpha_vague,
                             double alpha_noise, SourceStream& stream) {
    const double p_v = stream.uniform();
    const double p_n = stream.uniform();
    const VaguenessOutcome vague = apply_vagueness(k, h, alpha_vague, p_v);
    CorruptedLabel out{vague.label, vague.hops, vague.triggered};
    if (p_n > alpha_noise) {
        out.noise_triggered = true;
        const auto sibs = h.siblings(out.label);
        if (!sibs.empty()) {
            out.label = sibs[stream.index(sibs.size())];
            out.swapped = true;
        }
    }
    return out;
}

PredictionSet generate_predictions(const SparseBinaryMatrix& truth, const LabelHierarchy& h,
                                   const GenConfig& cfg) {
    cfg.validate();
    if (truth.cols() != h.num_labels()) {
        throw std::invalid_argument("ground truth has " + std::to_string(truth.cols()) +
                                    " labels but hierarchy has " + std::to_string(h.num_labels()));
    }
    PredictionSet preds(truth.rows(), truth.cols());
    for (std::size_t m = 0; m < cfg.n_sources; ++m) {
        SourceStream stream(cfg.seed, m);
        SparseBinaryMatrix y(truth.rows(), truth.cols());
        for (std::size_t i = 0; i < truth.rows(); ++i) {
            for (LabelIndex k : truth.row(i)) {
                y.set(i, corrupt_label(k, h, cfg.alpha_vague, cfg.alpha_noise, stream).label);
            }
        }
        preds.add_source(std::move(y));
    }
    return preds;
}

}  // namespace mhpc
