#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "survtest/bootstrap.hpp"

namespace survtest {

/// M x b matrix of joint Wild Bootstrap draws; row l uses one weight vector
/// shared by every hypothesis. All Gram matrices must come from the same
/// sample.
Eigen::MatrixXd joint_wild_draws(const std::vector<GramMatrix>& grams, int M, std::uint64_t seed,
                                 WeightLaw law, int threads = 1);

/// beta_hat on the grid {0, 1/M, ..., 1}: the largest beta for which the
/// share of replicates exceeding at least one per-hypothesis (1-beta)-quantile
/// stays <= alpha. Binary search; the exceedance share is non-decreasing in
/// beta.
double beta_hat_search(const Eigen::MatrixXd& draw_matrix, double alpha);

/// Exhaustive linear scan over the full grid; test oracle for the search.
double beta_hat_scan(const Eigen::MatrixXd& draw_matrix, double alpha);

struct LocalTestResult {
    std::string label;
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
};

struct MCTestResult {
    std::vector<LocalTestResult> locals;
    double beta_hat = 0.0;
    bool global_reject = false;
    int M = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    WeightLaw weight_law = WeightLaw::Rademacher;
};

/// Multiple-contrast procedure: joint bootstrap with shared weights, beta_hat
/// calibration, local decisions stat_i >= q_i(1 - beta_hat).
MCTestResult mctest(const SurvivalSample& sample, const std::vector<ContrastMatrix>& hypotheses,
                    const KernelSpec& spec, int M, double alpha, std::uint64_t seed,
                    WeightLaw law = WeightLaw::Rademacher, int threads = 1);

}  // namespace survtest
