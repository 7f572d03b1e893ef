#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace survtest {

/// Crossed factorial design. Groups are numbered 1..k in lexicographic order
/// over the factor-level tuples (last factor varies fastest).
struct FactorialDesign {
    std::vector<int> factor_levels;
    std::vector<std::string> factor_names;  // optional, parallel to factor_levels

    int num_factors() const { return static_cast<int>(factor_levels.size()); }
    int num_groups() const;

    /// 1-based group index for a 1-based level tuple.
    int group_index(const std::vector<int>& levels) const;
    /// Inverse of group_index: 1-based level tuple for group g in 1..k.
    std::vector<int> level_tuple(int group) const;

    /// Resolve a factor given by name or 1-based index string; returns 0-based
    /// position. Throws SchemaError if unknown.
    int resolve_factor(const std::string& id) const;

    /// Integer labels for the group kernel, one per group. Cells are numbered
    /// with the first factor varying fastest, so groups that differ only in the
    /// first factor get adjacent labels. With a single factor this is the
    /// identity labelling.
    std::vector<int> kernel_labels() const;

    static FactorialDesign single_factor(int k);
};

/// r x k matrix C with zero row sums; rows encode the linear hypotheses
/// C * Lambda = 0 on the vector of group cumulative hazards.
struct ContrastMatrix {
    Eigen::MatrixXd entries;
    std::string label;
    std::vector<std::string> row_labels;  // optional, one per row

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

enum class HypothesisKind { MainEffect, Effect, Interaction, Dunnett, Tukey };

/// Validates row sums and shape; throws SchemaError on violation.
ContrastMatrix make_contrast(Eigen::MatrixXd entries, std::string label = "");

/// Build the contrast matrix for a standard factorial hypothesis.
/// `factor` is the 0-based factor position (ignored for interaction/dunnett/tukey).
ContrastMatrix build_hypothesis(const FactorialDesign& design, HypothesisKind kind, int factor = 0);

/// Parse a CLI hypothesis spec: main-effect:<factor>, effect:<factor>,
/// interaction, dunnett, tukey.
ContrastMatrix parse_hypothesis(const FactorialDesign& design, const std::string& spec);

/// Orthonormal basis V (k x d) of the null space of C, d = k - rank(C).
Eigen::MatrixXd null_space_basis(const ContrastMatrix& C);

/// One single-row contrast per row of C, in order.
std::vector<ContrastMatrix> split_rows(const ContrastMatrix& C);

}  // namespace survtest
