#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace mixedgraph {

/// Per-column variable kind. Ordinal columns carry their admissible level
/// codes in strictly increasing order (at least two of them); continuous
/// columns carry nothing beyond the tag.
struct VariableKind {
    enum class Tag { Continuous, Ordinal };

    Tag tag = Tag::Continuous;
    std::vector<double> levels;  // Ordinal only, strictly increasing

    static VariableKind continuous() { return {}; }
    static VariableKind ordinal(std::vector<double> levels);

    bool is_ordinal() const { return tag == Tag::Ordinal; }
    bool operator==(const VariableKind&) const = default;
};

/// n x d observation matrix with per-column kind metadata. Immutable by
/// convention once validated; safe to share read-only across workers.
struct MixedDataset {
    Eigen::MatrixXd values;           // n x d
    std::vector<VariableKind> kinds;  // size d
    std::vector<std::string> names;   // size d

    int n() const { return static_cast<int>(values.rows()); }
    int d() const { return static_cast<int>(values.cols()); }
    int d1() const;  // ordinal column count
    int d2() const;  // continuous column count

    /// Enforces the construction invariants: n >= 2, d >= 2, finite
    /// entries, ordinal values members of their level sets, no constant
    /// columns. Throws ValidationError naming the offending column.
    void validate() const;
};

/// Kind inference: a column whose values are all integer-valued with at
/// most max_levels distinct codes becomes Ordinal (sorted distinct codes
/// as levels); anything else is Continuous. Constant columns are
/// rejected as degenerate.
std::vector<VariableKind> infer_variable_kinds(const Eigen::MatrixXd& values,
                                               int max_levels = 20);

/// Reads a rectangular numeric CSV (header row required). When kind_spec
/// is absent, kinds come from infer_variable_kinds.
MixedDataset ingest_csv(const std::string& path,
                        std::optional<std::vector<VariableKind>> kind_spec = {},
                        int max_levels = 20);

/// Round-trip writers: CSV values with shortest-exact decimal formatting,
/// and the kind sidecar (`name,kind[,levels...]` per line).
void write_csv(const MixedDataset& data, const std::string& path);
void write_kinds_sidecar(const MixedDataset& data, const std::string& path);
std::vector<VariableKind> read_kinds_sidecar(const std::string& path,
                                             const std::vector<std::string>& names);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace mixedgraph
