#include "survtest/multiple.hpp"

#include <algorithm>
#include <cmath>

#include "survtest/errors.hpp"
#include "survtest/parallel.hpp"

namespace survtest {

namespace {

// Column-wise ascending sort.
Eigen::MatrixXd sorted_columns(const Eigen::MatrixXd& draws) {
    Eigen::MatrixXd s = draws;
    for (Eigen::Index i = 0; i < s.cols(); ++i)
        std::sort(s.col(i).data(), s.col(i).data() + s.rows());
    return s;
}

// Share of replicates where some hypothesis draw strictly exceeds its
// (1 - j/M)-quantile; grid index j in 0..M.
double exceedance_share(const Eigen::MatrixXd& draws, const Eigen::MatrixXd& sorted, int j) {
    const int M = static_cast<int>(draws.rows());
    const int b = static_cast<int>(draws.cols());
    const int idx = std::max(M - j, 1);  // order-statistic index of the (1-j/M)-quantile
    int count = 0;
    for (int l = 0; l < M; ++l) {
        for (int i = 0; i < b; ++i) {
            if (draws(l, i) > sorted(idx - 1, i)) {
                ++count;
                break;
            }
        }
    }
    return static_cast<double>(count) / M;
}

}  // namespace

Eigen::MatrixXd joint_wild_draws(const std::vector<GramMatrix>& grams, int M, std::uint64_t seed,
                                 WeightLaw law, int threads) {
    if (grams.empty()) throw SchemaError("no hypotheses given");
    if (M < 1) throw SchemaError("bootstrap replication count must be >= 1");
    const int n = grams.front().n;
    for (const auto& g : grams)
        if (g.n != n) throw SchemaError("hypotheses were built from samples of different size");

    const int b = static_cast<int>(grams.size());
    Eigen::MatrixXd draws(M, b);
    parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t l) {
        const Eigen::VectorXd w = bootstrap_weights(n, seed, l, law);
        for (int i = 0; i < b; ++i)
            draws(static_cast<Eigen::Index>(l), i) = quadratic_form(grams[i], w);
    });
    return draws;
}

double beta_hat_search(const Eigen::MatrixXd& draw_matrix, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw SchemaError("alpha must lie in (0,1)");
    const int M = static_cast<int>(draw_matrix.rows());
    const Eigen::MatrixXd sorted = sorted_columns(draw_matrix);
    // j = 0 is always feasible: nothing strictly exceeds the column maximum.
    int lo = 0, hi = M;
    while (lo < hi) {
        const int mid = lo + (hi - lo + 1) / 2;
        if (exceedance_share(draw_matrix, sorted, mid) <= alpha)
            lo = mid;
        else
            hi = mid - 1;
    }
    return static_cast<double>(lo) / M;
}

double beta_hat_scan(const Eigen::MatrixXd& draw_matrix, double alpha) {
    const int M = static_cast<int>(draw_matrix.rows());
    const Eigen::MatrixXd sorted = sorted_columns(draw_matrix);
    int best = 0;
    for (int j = 0; j <= M; ++j)
        if (exceedance_share(draw_matrix, sorted, j) <= alpha) best = j;
    return static_cast<double>(best) / M;
}

MCTestResult mctest(const SurvivalSample& sample, const std::vector<ContrastMatrix>& hypotheses,
                    const KernelSpec& spec, int M, double alpha, std::uint64_t seed, WeightLaw law,
                    int threads) {
    if (hypotheses.empty()) throw SchemaError("no hypotheses given");
    const int b = static_cast<int>(hypotheses.size());

    std::vector<GramMatrix> grams;
    grams.reserve(b);
    for (const auto& C : hypotheses) {
        if (C.cols() != sample.k)
            throw SchemaError("contrast matrix has " + std::to_string(C.cols()) +
                              " columns but the sample has " + std::to_string(sample.k) + " groups");
        grams.push_back(gram(sample, null_space_basis(C), spec));
    }

    const Eigen::MatrixXd draws = joint_wild_draws(grams, M, seed, law, threads);
    const Eigen::MatrixXd sorted = sorted_columns(draws);

    MCTestResult res;
    res.M = M;
    res.alpha = alpha;
    res.seed = seed;
    res.weight_law = law;
    res.beta_hat = beta_hat_search(draws, alpha);
    const int jhat = static_cast<int>(std::lround(res.beta_hat * M));
    const int idx = std::max(M - jhat, 1);

    for (int i = 0; i < b; ++i) {
        LocalTestResult local;
        local.label = hypotheses[i].label;
        local.statistic = statistic(grams[i]);
        local.critical_value = sorted(idx - 1, i);
        int count_ge = 0;
        for (int l = 0; l < M; ++l)
            if (draws(l, i) >= local.statistic) ++count_ge;
        local.p_value = (1.0 + count_ge) / (M + 1.0);
        local.reject = local.statistic >= local.critical_value;
        res.global_reject = res.global_reject || local.reject;
        res.locals.push_back(std::move(local));
    }
    return res;
}

}  // namespace survtest
