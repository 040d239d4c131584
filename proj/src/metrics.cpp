#include "mhpc/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mhpc {

namespace {

void check_inputs(const Matrix& scores, const SparseBinaryMatrix& truth) {
    if (static_cast<std::size_t>(scores.rows()) != truth.rows() ||
        static_cast<std::size_t>(scores.cols()) != truth.cols()) {
        throw MetricsError("score matrix is " + std::to_string(scores.rows()) + "x" +
                           std::to_string(scores.cols()) + ", ground truth is " +
                           std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
    }
    if (!scores.allFinite()) throw MetricsError("score matrix has non-finite entries");
}

}  // namespace

double ranking_loss(const Matrix& scores, const SparseBinaryMatrix& truth, std::size_t* skipped) {
    check_inputs(scores, truth);
    const auto n_labels = truth.cols();
    double total = 0.0;
    std::size_t eligible = 0;
    std::size_t excluded = 0;
    std::vector<double> neg;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const auto pos = truth.row(i);
        if (pos.empty() || pos.size() == n_labels) {
            ++excluded;
            continue;
        }
        const auto row = static_cast<Eigen::Index>(i);
        neg.clear();
        for (LabelIndex k = 0; k < n_labels; ++k) {
            if (!std::binary_search(pos.begin(), pos.end(), k)) {
                neg.push_back(scores(row, static_cast<Eigen::Index>(k)));
            }
        }
        std::sort(neg.begin(), neg.end());
        std::uint64_t half_units = 0;  // 2 per misordered pair, 1 per tie
        for (LabelIndex k : pos) {
            const double s = scores(row, static_cast<Eigen::Index>(k));
            const auto [lo, hi] = std::equal_range(neg.begin(), neg.end(), s);
            half_units += 2 * static_cast<std::uint64_t>(neg.end() - hi) +
                          static_cast<std::uint64_t>(hi - lo);
        }
        total += static_cast<double>(half_units) /
                 (2.0 * static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
        ++eligible;
    }
    if (skipped) *skipped = excluded;
    if (eligible == 0) {
        throw MetricsError("ranking loss: no instance has both positive and negative labels");
    }
    return total / static_cast<double>(eligible);
}

double micro_auc(const Matrix& scores, const SparseBinaryMatrix& truth) {
    check_inputs(scores, truth);
    std::vector<std::pair<double, bool>> entries;
    entries.reserve(truth.rows() * truth.cols());
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const auto pos = truth.row(i);
        for (LabelIndex k = 0; k < truth.cols(); ++k) {
            entries.emplace_back(scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)),
                                 std::binary_search(pos.begin(), pos.end(), k));
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    std::uint64_t half_units = 0;  // 2 per won pair, 1 per tie
    for (std::size_t start = 0; start < entries.size();) {
        std::size_t end = start;
        std::uint64_t group_pos = 0;
        std::uint64_t group_neg = 0;
        while (end < entries.size() && entries[end].first == entries[start].first) {
            (entries[end].second ? group_pos : group_neg) += 1;
            ++end;
        }
        half_units += 2 * group_pos * n_neg + group_pos * group_neg;
        n_pos += group_pos;
        n_neg += group_neg;
        start = end;
    }
    if (n_pos == 0 || n_neg == 0) {
        throw MetricsError("micro-AUC needs at least one positive and one negative entry");
    }
    return static_cast<double>(half_units) /
           (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double coverage_error(const Matrix& scores, const SparseBinaryMatrix& truth, std::size_t* skipped) {
    check_inputs(scores, truth);
    double total = 0.0;
    std::size_t eligible = 0;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const auto pos = truth.row(i);
        if (pos.empty()) {
            ++excluded;
            continue;
        }
        const auto row = scores.row(static_cast<Eigen::Index>(i));
        double worst = std::numeric_limits<double>::infinity();
        for (LabelIndex k : pos) worst = std::min(worst, row(static_cast<Eigen::Index>(k)));
        total += static_cast<double>((row.array() >= worst).count());
        ++eligible;
    }
    if (skipped) *skipped = excluded;
    if (eligible == 0) throw MetricsError("coverage error: no instance has a positive label");
    return total / static_cast<double>(eligible);
}

MetricsReport evaluate(const Matrix& scores, const SparseBinaryMatrix& truth) {
    MetricsReport report;
    report.ranking_loss = ranking_loss(scores, truth, &report.skipped);
    report.micro_auc = micro_auc(scores, truth);
    report.coverage_error = coverage_error(scores, truth);
    return report;
}

}  // namespace mhpc
