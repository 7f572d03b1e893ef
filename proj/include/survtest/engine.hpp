#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace survtest {

/// Right-censored sample: observed times, event indicators, group labels 1..k.
struct SurvivalSample {
    Eigen::VectorXd times;
    std::vector<int> status;  // 1 = event observed, 0 = censored
    std::vector<int> groups;  // 1..k
    int k = 0;

    int n() const { return static_cast<int>(times.size()); }
    int num_events() const;
};

/// Throws SchemaError on shape/label violations. Does not require events.
void validate_sample(const SurvivalSample& sample);

struct EventRecord {
    double time;
    int group;             // 1..k
    int sample_index;      // position in the original sample
    Eigen::VectorXd risk;  // Y(t), per group, >= convention
};

/// Observed events sorted by (time, original index). Throws
/// DegenerateDataError when the sample has no events.
struct EventTable {
    std::vector<EventRecord> events;
};

EventTable event_table(const SurvivalSample& sample);

struct ProjectionAt {
    Eigen::MatrixXd Q;  // k x k; zero when not full rank
    bool full_rank = false;
};

/// Orthogonal projection onto the complement of col(diag(Y)V/n), computed from
/// an SVD of Xhat rather than the normal equations. Rank tolerance
/// 1e-10 * sigma_max.
ProjectionAt projection_at(const Eigen::VectorXd& risk, const Eigen::MatrixXd& V, int n);

/// Per-observation residual vectors a_i = Delta_i * Qhat(T_i) e_{X_i}; zero for
/// censored observations and at times where Xhat loses rank.
std::vector<Eigen::VectorXd> residual_vectors(const SurvivalSample& sample, const Eigen::MatrixXd& V);

/// Weighted log-rank statistic for a fixed weight function w(time, group).
double weighted_logrank(const SurvivalSample& sample, const Eigen::MatrixXd& V,
                        const std::function<double(double, int)>& w);

/// Right-continuous vector-valued step function with jumps at event times.
struct StepFunction {
    int dim = 0;
    std::vector<double> times;             // ascending jump times
    std::vector<Eigen::VectorXd> values;   // cumulative value at each jump

    Eigen::VectorXd eval(double t) const;
};

/// Constrained OLS estimate of the cumulative hazard vector under C Lambda = 0.
StepFunction constrained_cumhaz(const SurvivalSample& sample, const Eigen::MatrixXd& V);

/// Plain per-group Nelson-Aalen estimators (k scalar step functions stacked).
StepFunction nelson_aalen(const SurvivalSample& sample);

}  // namespace survtest
