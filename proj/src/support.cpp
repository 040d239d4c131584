#include "mhpc/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mhpc {

namespace {

constexpr int kMaxFractionTerms = 300;
constexpr double kFractionEps = 1e-16;
constexpr double kTiny = 1e-300;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a, b) / (x^a (1-x)^b / (a B(a, b))).
double beta_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxFractionTerms; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kFractionEps) break;
    }
    return h;
}

void check_shapes(double a, double b) {
    if (!(std::isfinite(a) && a > 0.0) || !(std::isfinite(b) && b > 0.0)) {
        throw std::invalid_argument("beta shapes must be positive and finite, got a=" +
                                    std::to_string(a) + " b=" + std::to_string(b));
    }
}

}  // namespace

Vector SupportVector::as_vector() const {
    Vector v(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t k = 0; k < weights.size(); ++k) v(static_cast<Eigen::Index>(k)) = weights[k];
    return v;
}

double regularized_incomplete_beta(double x, double a, double b) {
    check_shapes(a, b);
    if (std::isnan(x)) throw std::invalid_argument("incomplete beta argument is NaN");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_fraction(x, a, b) / a;
    }
    return 1.0 - std::exp(log_front) * beta_fraction(1.0 - x, b, a) / b;
}

double beta_quantile(double p, double a, double b) {
    check_shapes(a, b);
    if (!(std::isfinite(p) && p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("beta quantile probability must lie in (0, 1), got " +
                                    std::to_string(p));
    }
    const double log_norm = log_beta(a, b);
    double lo = 0.0;
    double hi = 1.0;
    double x = a / (a + b);
    for (int iter = 0; iter < 400; ++iter) {
        const double f = regularized_incomplete_beta(x, a, b) - p;
        if (f == 0.0) return x;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double log_density = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_norm;
        double next = x - f / std::exp(log_density);
        // Fall back to bisection whenever Newton leaves the bracket.
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x || hi - lo <= kTiny) break;
    }
    return x;
}

OccurrenceVector occurrence_vector(const PredictionSet& preds, const LabelHierarchy& h) {
    if (preds.n_labels() != h.num_labels()) {
        throw std::invalid_argument("prediction set has " + std::to_string(preds.n_labels()) +
                                    " labels but hierarchy has " +
                                    std::to_string(h.num_labels()));
    }
    OccurrenceVector out{std::vector<std::uint64_t>(h.num_labels(), 0)};
    for (const auto& y : preds.sources()) {
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (LabelIndex k : augment_labels(y.row(i), h)) ++out.counts[k];
        }
    }
    return out;
}

SupportVector support_vector(const OccurrenceVector& occurrences, std::size_t n_instances,
                             double alpha) {
    if (n_instances == 0) throw std::invalid_argument("support vector needs N > 0 instances");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("significance alpha must lie in (0, 1), got " +
                                    std::to_string(alpha));
    }
    SupportVector s{std::vector<double>(occurrences.counts.size(), 0.0), alpha};
    const auto n = static_cast<std::uint64_t>(n_instances);
    for (std::size_t k = 0; k < occurrences.counts.size(); ++k) {
        const std::uint64_t c = std::min(occurrences.counts[k], n);
        if (c == 0) continue;
        s.weights[k] = beta_quantile(alpha / 2.0, static_cast<double>(c),
                                     static_cast<double>(n - c + 1));
    }
    return s;
}

}  // namespace mhpc
