#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace survtest {

enum class TimeKernel { SquaredExponential, OrnsteinUhlenbeck };
enum class GroupKernel { RationalQuadratic, Identity };

/// Product kernel K((t,i),(s,j)) = L(t,s) * J(i,j).
struct KernelSpec {
    TimeKernel time_kernel = TimeKernel::SquaredExponential;
    double length_scale_sq = 0.1;  // SE: l^2; OU: scale sigma
    GroupKernel group_kernel = GroupKernel::RationalQuadratic;
    double rq_a = 2.0;
    double rq_b = 1.0;
    bool rescale_times = false;
    /// Integer label per group fed to the group kernel; empty means label g for
    /// group g. Factorial designs supply labels via FactorialDesign::kernel_labels
    /// so that cells differing only in the first factor sit next to each other.
    std::vector<int> group_labels;

    /// Validates hyperparameter positivity; throws SchemaError.
    void validate() const;

    std::string describe() const;
};

/// Parse the CLI kernel syntax, e.g. "se:0.1,rq:2:1", "ou:1,id".
KernelSpec parse_kernel(const std::string& text);

double time_kernel_eval(const KernelSpec& spec, double t, double s);

/// Gram matrix of the group kernel on the labels of groups 1..k.
Eigen::MatrixXd group_kernel_matrix(const KernelSpec& spec, int k);

/// Divide all times by the maximum observed time. Requires max > 0.
Eigen::VectorXd rescale(const Eigen::VectorXd& times);

}  // namespace survtest
