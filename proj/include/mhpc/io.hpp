#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mhpc/consolidate.hpp"
#include "mhpc/hierarchy.hpp"
#include "mhpc/prediction_set.hpp"
#include "mhpc/support.hpp"

namespace mhpc {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense indices for string keys in first-appearance order.
class NameIndex {
public:
    std::size_t intern(const std::string& name);
    /// Throws std::out_of_range for an unknown name.
    std::size_t at(const std::string& name) const;
    bool contains(const std::string& name) const { return index_.contains(name); }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct HierarchyFile {
    LabelHierarchy hierarchy;
    NameIndex labels;
};

/// Reads `child<TAB>parent` lines; `ROOT` marks a top-level label and lines
/// starting with `#` are comments.
HierarchyFile parse_hierarchy(std::istream& in, std::string_view source_name);
HierarchyFile read_hierarchy(const std::filesystem::path& path);

struct LoadedPredictions {
    PredictionSet predictions;
    NameIndex instances;
};

/// Reads one `instance<TAB>label` file per source. Instances are indexed in
/// first-appearance order across the files; an instance a source never
/// mentions has an all-zero row in that source.
LoadedPredictions load_predictions(std::span<const std::filesystem::path> paths,
                                   const HierarchyFile& hierarchy);

/// Reads an `instance<TAB>label` ground-truth file, extending `instances`.
SparseBinaryMatrix load_truth(const std::filesystem::path& path, const HierarchyFile& hierarchy,
                              NameIndex& instances);

/// Reads an `instance<TAB>label<TAB>score` file into an N x K matrix over
/// `instances` (extended as needed); unlisted entries are zero.
Matrix load_scores(const std::filesystem::path& path, const HierarchyFile& hierarchy,
                   NameIndex& instances);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_labels(std::ostream& out, const SparseBinaryMatrix& y, const NameIndex& instances,
                  const NameIndex& labels);

/// Instances in index order, each sorted by descending score (ties by label
/// index).
void write_scores(std::ostream& out, const Matrix& scores, const NameIndex& instances,
                  const NameIndex& labels);

void write_trace(std::ostream& out, std::span<const IterationRecord> trace);

void write_support(std::ostream& out, const OccurrenceVector& occurrences,
                   const SupportVector& support, const NameIndex& labels);

void write_dense(std::ostream& out, const Matrix& m);

/// 64-bit FNV-1a digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace mhpc
