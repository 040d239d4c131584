#include "mhpc/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mhpc {

namespace {

constexpr std::string_view kRootToken = "ROOT";

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return in;
}

std::string location(std::string_view source, std::size_t line_no) {
    return std::string(source) + ":" + std::to_string(line_no);
}

bool skip_line(const std::string& line) {
    return line.empty() || line.front() == '#';
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

std::vector<std::string> expect_fields(const std::string& line, std::size_t count,
                                       std::string_view source, std::size_t line_no) {
    auto fields = split_tabs(line);
    if (fields.size() != count ||
        std::any_of(fields.begin(), fields.end(), [](const auto& f) { return f.empty(); })) {
        throw FormatError(location(source, line_no) + ": malformed line, expected " +
                          std::to_string(count) + " non-empty tab-separated fields");
    }
    return fields;
}

LabelIndex lookup_label(const HierarchyFile& hierarchy, const std::string& name,
                        std::string_view source, std::size_t line_no) {
    if (!hierarchy.labels.contains(name)) {
        throw FormatError(location(source, line_no) + ": unknown label '" + name +
                          "' (not in hierarchy)");
    }
    return hierarchy.labels.at(name);
}

// (instance, label) pairs of a two-column file, with instances interned.
std::vector<std::pair<std::size_t, LabelIndex>> read_pairs(const std::filesystem::path& path,
                                                           const HierarchyFile& hierarchy,
                                                           NameIndex& instances) {
    auto in = open_input(path);
    const std::string source = path.string();
    std::vector<std::pair<std::size_t, LabelIndex>> pairs;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        strip_cr(line);
        if (skip_line(line)) continue;
        const auto fields = expect_fields(line, 2, source, line_no);
        const LabelIndex k = lookup_label(hierarchy, fields[1], source, line_no);
        pairs.emplace_back(instances.intern(fields[0]), k);
    }
    return pairs;
}

}  // namespace

std::size_t NameIndex::intern(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, names_.size());
    if (inserted) names_.push_back(name);
    return it->second;
}

std::size_t NameIndex::at(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown name '" + name + "'");
    return it->second;
}

HierarchyFile parse_hierarchy(std::istream& in, std::string_view source_name) {
    NameIndex labels;
    std::vector<std::pair<std::size_t, std::size_t>> raw;  // child, parent (or npos)
    constexpr auto kNoParent = std::numeric_limits<std::size_t>::max();
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        strip_cr(line);
        if (skip_line(line)) continue;
        const auto fields = expect_fields(line, 2, source_name, line_no);
        if (fields[0] == kRootToken) {
            throw FormatError(location(source_name, line_no) + ": ROOT cannot be a child");
        }
        const std::size_t child = labels.intern(fields[0]);
        const std::size_t parent = fields[1] == kRootToken ? kNoParent : labels.intern(fields[1]);
        raw.emplace_back(child, parent);
    }
    std::vector<HierarchyEdge> edges;
    edges.reserve(raw.size());
    for (auto [child, parent] : raw) {
        edges.push_back({child, parent == kNoParent ? kRoot : parent});
    }
    try {
        return {LabelHierarchy::build(labels.size(), edges), std::move(labels)};
    } catch (const HierarchyError& e) {
        throw HierarchyError(std::string(source_name) + ": " + e.what());
    }
}

HierarchyFile read_hierarchy(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_hierarchy(in, path.string());
}

LoadedPredictions load_predictions(std::span<const std::filesystem::path> paths,
                                   const HierarchyFile& hierarchy) {
    if (paths.empty()) throw FormatError("at least one prediction file is required");
    NameIndex instances;
    std::vector<std::vector<std::pair<std::size_t, LabelIndex>>> per_source;
    for (const auto& p : paths) per_source.push_back(read_pairs(p, hierarchy, instances));

    LoadedPredictions out{PredictionSet(instances.size(), hierarchy.hierarchy.num_labels()),
                          std::move(instances)};
    for (const auto& pairs : per_source) {
        SparseBinaryMatrix y(out.instances.size(), hierarchy.hierarchy.num_labels());
        for (auto [i, k] : pairs) y.set(i, k);
        out.predictions.add_source(std::move(y));
    }
    return out;
}

SparseBinaryMatrix load_truth(const std::filesystem::path& path, const HierarchyFile& hierarchy,
                              NameIndex& instances) {
    const auto pairs = read_pairs(path, hierarchy, instances);
    SparseBinaryMatrix z(instances.size(), hierarchy.hierarchy.num_labels());
    for (auto [i, k] : pairs) z.set(i, k);
    return z;
}

Matrix load_scores(const std::filesystem::path& path, const HierarchyFile& hierarchy,
                   NameIndex& instances) {
    auto in = open_input(path);
    const std::string source = path.string();
    struct Entry {
        std::size_t instance;
        LabelIndex label;
        double score;
    };
    std::vector<Entry> entries;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        strip_cr(line);
        if (skip_line(line)) continue;
        const auto fields = expect_fields(line, 3, source, line_no);
        const LabelIndex k = lookup_label(hierarchy, fields[1], source, line_no);
        double score = 0.0;
        const auto& text = fields[2];
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), score);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(score)) {
            throw FormatError(location(source, line_no) + ": malformed score '" + text + "'");
        }
        entries.push_back({instances.intern(fields[0]), k, score});
    }
    Matrix scores = Matrix::Zero(static_cast<Eigen::Index>(instances.size()),
                                 static_cast<Eigen::Index>(hierarchy.hierarchy.num_labels()));
    for (const auto& e : entries) {
        scores(static_cast<Eigen::Index>(e.instance), static_cast<Eigen::Index>(e.label)) = e.score;
    }
    return scores;
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw std::runtime_error("cannot format number");
    return std::string(buf.data(), ptr);
}

void write_labels(std::ostream& out, const SparseBinaryMatrix& y, const NameIndex& instances,
                  const NameIndex& labels) {
    for (std::size_t i = 0; i < y.rows(); ++i) {
        for (LabelIndex k : y.row(i)) out << instances.name(i) << '\t' << labels.name(k) << '\n';
    }
}

void write_scores(std::ostream& out, const Matrix& scores, const NameIndex& instances,
                  const NameIndex& labels) {
    std::vector<LabelIndex> order(static_cast<std::size_t>(scores.cols()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        std::iota(order.begin(), order.end(), LabelIndex{0});
        std::stable_sort(order.begin(), order.end(), [&](LabelIndex a, LabelIndex b) {
            return scores(i, static_cast<Eigen::Index>(a)) > scores(i, static_cast<Eigen::Index>(b));
        });
        const auto& instance = instances.name(static_cast<std::size_t>(i));
        for (LabelIndex k : order) {
            out << instance << '\t' << labels.name(k) << '\t'
                << format_double(scores(i, static_cast<Eigen::Index>(k))) << '\n';
        }
    }
}

void write_trace(std::ostream& out, std::span<const IterationRecord> trace) {
    out << "iter\tobjective\tdelta_fro\n";
    for (const auto& r : trace) {
        out << r.iteration << '\t' << format_double(r.objective) << '\t'
            << format_double(r.delta_fro) << '\n';
    }
}

void write_support(std::ostream& out, const OccurrenceVector& occurrences,
                   const SupportVector& support, const NameIndex& labels) {
    out << "label\tcount\tsupport\n";
    for (std::size_t k = 0; k < support.weights.size(); ++k) {
        out << labels.name(k) << '\t' << occurrences.counts.at(k) << '\t'
            << format_double(support.weights[k]) << '\n';
    }
}

void write_dense(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << '\t';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

std::string file_digest(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    std::array<char, 1 << 14> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
            hash *= 0x100000001b3ull;
        }
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << hash;
    return hex.str();
}

}  // namespace mhpc
