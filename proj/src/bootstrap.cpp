#include "survtest/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "survtest/errors.hpp"
#include "survtest/parallel.hpp"
#include "survtest/rng.hpp"

namespace survtest {

Eigen::VectorXd bootstrap_weights(int n, std::uint64_t seed, std::uint64_t index, WeightLaw law) {
    auto rng = stream_rng(seed, index);
    Eigen::VectorXd w(n);
    if (law == WeightLaw::Rademacher) {
        for (int i = 0; i < n; ++i) w(i) = (rng() & 1u) ? 1.0 : -1.0;
    } else {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < n; ++i) w(i) = normal(rng);
    }
    return w;
}

double quadratic_form(const GramMatrix& g, const Eigen::VectorXd& weights) {
    const int m = static_cast<int>(g.event_rows.size());
    Eigen::VectorXd we(m);
    for (int p = 0; p < m; ++p) we(p) = weights(g.event_rows[p]);
    return event_quadratic_form(g, we);
}

BootstrapDraws wild_draws(const GramMatrix& g, int M, std::uint64_t seed, WeightLaw law, int threads) {
    if (M < 1) throw SchemaError("bootstrap replication count must be >= 1");
    BootstrapDraws out;
    out.seed = seed;
    out.weight_law = law;
    out.values.resize(M);
    parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t l) {
        out.values(static_cast<Eigen::Index>(l)) =
            quadratic_form(g, bootstrap_weights(g.n, seed, l, law));
    });
    return out;
}

double empirical_quantile(const Eigen::VectorXd& draws, double level) {
    const int M = static_cast<int>(draws.size());
    std::vector<double> sorted(draws.data(), draws.data() + M);
    std::sort(sorted.begin(), sorted.end());
    int idx = static_cast<int>(std::ceil(level * M));
    idx = std::max(1, std::min(M, idx));
    return sorted[idx - 1];
}

TestResult single_test(const SurvivalSample& sample, const ContrastMatrix& C, const KernelSpec& spec,
                       int M, double alpha, std::uint64_t seed, WeightLaw law, int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw SchemaError("alpha must lie in (0,1)");
    const Eigen::MatrixXd V = null_space_basis(C);
    const GramMatrix g = gram(sample, V, spec);

    TestResult res;
    res.statistic = statistic(g);
    res.M = M;
    res.alpha = alpha;
    res.seed = seed;
    res.weight_law = law;

    const BootstrapDraws draws = wild_draws(g, M, seed, law, threads);
    res.critical_value = empirical_quantile(draws.values, 1.0 - alpha);
    int count_ge = 0;
    for (int l = 0; l < M; ++l)
        if (draws.values(l) >= res.statistic) ++count_ge;
    res.p_value = (1.0 + count_ge) / (M + 1.0);
    res.reject = res.statistic > res.critical_value;
    return res;
}

}  // namespace survtest
