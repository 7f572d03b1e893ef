#include "survtest/contrasts.hpp"

#include <Eigen/SVD>
#include <sstream>

#include "survtest/errors.hpp"

namespace survtest {

namespace {

std::string group_name(const FactorialDesign& d, int group) {
    const auto tuple = d.level_tuple(group);
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? "," : "") << tuple[i];
    os << ")";
    return os.str();
}

}  // namespace

int FactorialDesign::num_groups() const {
    int k = 1;
    for (int l : factor_levels) k *= l;
    return k;
}

int FactorialDesign::group_index(const std::vector<int>& levels) const {
    if (levels.size() != factor_levels.size())
        throw SchemaError("level tuple length does not match design");
    int idx = 0;
    for (std::size_t f = 0; f < factor_levels.size(); ++f) {
        if (levels[f] < 1 || levels[f] > factor_levels[f])
            throw SchemaError("factor level out of range");
        idx = idx * factor_levels[f] + (levels[f] - 1);
    }
    return idx + 1;
}

std::vector<int> FactorialDesign::level_tuple(int group) const {
    int idx = group - 1;
    std::vector<int> levels(factor_levels.size());
    for (int f = static_cast<int>(factor_levels.size()) - 1; f >= 0; --f) {
        levels[f] = idx % factor_levels[f] + 1;
        idx /= factor_levels[f];
    }
    return levels;
}

int FactorialDesign::resolve_factor(const std::string& id) const {
    for (std::size_t i = 0; i < factor_names.size(); ++i)
        if (factor_names[i] == id) return static_cast<int>(i);
    try {
        const int pos = std::stoi(id);
        if (pos >= 1 && pos <= num_factors()) return pos - 1;
    } catch (const std::exception&) {
    }
    throw SchemaError("unknown factor: " + id);
}

std::vector<int> FactorialDesign::kernel_labels() const {
    const int k = num_groups();
    std::vector<int> labels(k);
    for (int g = 1; g <= k; ++g) {
        const auto tuple = level_tuple(g);
        // Rank of the tuple when the first factor is the fastest-running digit.
        int rank = 0;
        for (int f = num_factors() - 1; f >= 0; --f) rank = rank * factor_levels[f] + tuple[f] - 1;
        labels[g - 1] = rank + 1;
    }
    return labels;
}

FactorialDesign FactorialDesign::single_factor(int k) {
    FactorialDesign d;
    d.factor_levels = {k};
    d.factor_names = {"group"};
    return d;
}

ContrastMatrix make_contrast(Eigen::MatrixXd entries, std::string label) {
    if (entries.rows() < 1 || entries.cols() < 2)
        throw SchemaError("contrast matrix must be r x k with r >= 1, k >= 2");
    for (Eigen::Index r = 0; r < entries.rows(); ++r) {
        if (std::abs(entries.row(r).sum()) > 1e-9 * (1.0 + entries.row(r).cwiseAbs().maxCoeff()))
            throw SchemaError("contrast row " + std::to_string(r + 1) + " does not sum to zero");
        if (entries.row(r).cwiseAbs().maxCoeff() == 0.0)
            throw SchemaError("contrast row " + std::to_string(r + 1) + " is all zero");
    }
    return ContrastMatrix{std::move(entries), std::move(label)};
}

ContrastMatrix build_hypothesis(const FactorialDesign& design, HypothesisKind kind, int factor) {
    const int k = design.num_groups();
    if (k < 2) throw SchemaError("design must have at least 2 groups");

    if (kind == HypothesisKind::Dunnett || kind == HypothesisKind::Tukey) {
        const bool dunnett = kind == HypothesisKind::Dunnett;
        const int rows = dunnett ? k - 1 : k * (k - 1) / 2;
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, k);
        int r = 0;
        for (int g = 1; g <= k; ++g) {
            for (int h = g + 1; h <= k; ++h) {
                if (dunnett && g != 1) continue;
                C(r, g - 1) = -1.0;
                C(r, h - 1) = 1.0;
                ++r;
            }
        }
        return make_contrast(std::move(C), dunnett ? "dunnett" : "tukey");
    }

    if (kind == HypothesisKind::Interaction) {
        if (design.num_factors() != 2)
            throw SchemaError("interaction hypothesis requires a two-factor design");
        const int a = design.factor_levels[0];
        const int b = design.factor_levels[1];
        // One row per cell: Lambda_ij - Lambda_i. - Lambda_.j + Lambda_..
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
        for (int i = 1; i <= a; ++i) {
            for (int j = 1; j <= b; ++j) {
                const int row = design.group_index({i, j}) - 1;
                for (int ip = 1; ip <= a; ++ip) {
                    for (int jp = 1; jp <= b; ++jp) {
                        const int col = design.group_index({ip, jp}) - 1;
                        double c = 1.0 / (a * b);
                        if (ip == i) c -= 1.0 / b;
                        if (jp == j) c -= 1.0 / a;
                        if (ip == i && jp == j) c += 1.0;
                        C(row, col) = c;
                    }
                }
            }
        }
        return make_contrast(std::move(C), "interaction");
    }

    if (factor < 0 || factor >= design.num_factors())
        throw SchemaError("factor index out of range");
    const int levels = design.factor_levels[factor];
    if (levels < 2) throw SchemaError("hypothesis factor must have at least 2 levels");
    const int others = k / levels;

    // Enumerate the combinations of the remaining factors in lexicographic
    // order; group(v, combo) gives the flat group index for level v of the
    // tested factor within a fixed combination of the rest.
    auto group_of = [&](int v, int combo) {
        std::vector<int> tuple(design.num_factors());
        int rem = combo;
        for (int f = design.num_factors() - 1; f >= 0; --f) {
            if (f == factor) {
                tuple[f] = v;
                continue;
            }
            tuple[f] = rem % design.factor_levels[f] + 1;
            rem /= design.factor_levels[f];
        }
        return design.group_index(tuple) - 1;
    };

    if (kind == HypothesisKind::MainEffect) {
        // Lambda_1. = Lambda_v. in averaged form, one row per level v >= 2.
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(levels - 1, k);
        for (int v = 2; v <= levels; ++v) {
            for (int combo = 0; combo < others; ++combo) {
                C(v - 2, group_of(1, combo)) += 1.0 / others;
                C(v - 2, group_of(v, combo)) -= 1.0 / others;
            }
        }
        return make_contrast(std::move(C), "main-effect");
    }

    // Effect: Lambda cell comparisons level 1 vs v within each combination of
    // the other factors.
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(others * (levels - 1), k);
    std::vector<std::string> row_labels;
    int r = 0;
    for (int combo = 0; combo < others; ++combo) {
        for (int v = 2; v <= levels; ++v) {
            const int g1 = group_of(1, combo);
            const int gv = group_of(v, combo);
            C(r, g1) = 1.0;
            C(r, gv) = -1.0;
            row_labels.push_back("Lambda" + group_name(design, g1 + 1) + "=Lambda" +
                                 group_name(design, gv + 1));
            ++r;
        }
    }
    auto c = make_contrast(std::move(C), "effect");
    c.row_labels = std::move(row_labels);
    return c;
}

ContrastMatrix parse_hypothesis(const FactorialDesign& design, const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto factor = [&]() {
        if (arg.empty()) {
            if (design.num_factors() == 1) return 0;
            throw SchemaError("hypothesis '" + kind + "' needs a factor, e.g. " + kind + ":1");
        }
        return design.resolve_factor(arg);
    };
    ContrastMatrix c;
    if (kind == "main-effect") c = build_hypothesis(design, HypothesisKind::MainEffect, factor());
    else if (kind == "effect") c = build_hypothesis(design, HypothesisKind::Effect, factor());
    else if (kind == "interaction") c = build_hypothesis(design, HypothesisKind::Interaction);
    else if (kind == "dunnett") c = build_hypothesis(design, HypothesisKind::Dunnett);
    else if (kind == "tukey") c = build_hypothesis(design, HypothesisKind::Tukey);
    else throw SchemaError("unknown hypothesis kind: " + kind);
    c.label = spec;
    return c;
}

Eigen::MatrixXd null_space_basis(const ContrastMatrix& C) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C.entries, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    const int k = C.cols();
    const int d = k - rank;
    // d >= 1 always: the all-ones vector lies in N(C).
    return svd.matrixV().rightCols(d);
}

std::vector<ContrastMatrix> split_rows(const ContrastMatrix& C) {
    std::vector<ContrastMatrix> out;
    out.reserve(C.rows());
    for (int r = 0; r < C.rows(); ++r) {
        ContrastMatrix row;
        row.entries = C.entries.row(r);
        if (static_cast<int>(C.row_labels.size()) == C.rows())
            row.label = C.row_labels[r];
        else
            row.label = C.label.empty() ? "row " + std::to_string(r + 1)
                                        : C.label + "[" + std::to_string(r + 1) + "]";
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace survtest
