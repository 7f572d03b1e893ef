#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "survtest/contrasts.hpp"
#include "survtest/teststat.hpp"

namespace survtest {

enum class WeightLaw { Rademacher, Normal };

struct BootstrapDraws {
    Eigen::VectorXd values;  // M nonnegative draws, replicate order
    std::uint64_t seed = 0;
    WeightLaw weight_law = WeightLaw::Rademacher;
};

/// Weight vector for replicate `index` of the stream (seed, weight_law);
/// length n. Exposed so tests can force specific weights.
Eigen::VectorXd bootstrap_weights(int n, std::uint64_t seed, std::uint64_t index, WeightLaw law);

/// W^T G W / n for a full-length weight vector W.
double quadratic_form(const GramMatrix& g, const Eigen::VectorXd& weights);

/// M Wild Bootstrap draws; replicate `l` uses the stream (seed, l), so the
/// result is identical for any `threads`.
BootstrapDraws wild_draws(const GramMatrix& g, int M, std::uint64_t seed, WeightLaw law,
                          int threads = 1);

/// Ascending order statistic at index ceil(level * M), clamped to [1, M].
double empirical_quantile(const Eigen::VectorXd& draws, double level);

struct TestResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    int M = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    WeightLaw weight_law = WeightLaw::Rademacher;
};

/// Single-contrast test: statistic, Wild Bootstrap quantile at 1-alpha,
/// p-value (1 + #{draws >= stat}) / (M+1), reject iff stat > quantile.
TestResult single_test(const SurvivalSample& sample, const ContrastMatrix& C, const KernelSpec& spec,
                       int M, double alpha, std::uint64_t seed,
                       WeightLaw law = WeightLaw::Rademacher, int threads = 1);

}  // namespace survtest
