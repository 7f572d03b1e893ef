#pragma once

#include <Eigen/Dense>
#include <vector>

#include "survtest/contrasts.hpp"
#include "survtest/engine.hpp"
#include "survtest/kernels.hpp"

namespace survtest {

/// n x n matrix G with G_ij = L(T_i,T_j) * a_i^T J a_j; rows/columns of
/// censored observations are zero, so the bootstrap only touches events.
struct GramMatrix {
    Eigen::MatrixXd G;            // m x m over events only
    std::vector<int> event_rows;  // sample index per Gram row
    int n = 0;                    // full sample size

    double full_entry(int i, int j) const;  // indexed over 0..n-1
};

GramMatrix gram(const SurvivalSample& sample, const Eigen::MatrixXd& V, const KernelSpec& spec);

/// Gram built from precomputed residual vectors (shared across kernels).
GramMatrix gram_from_residuals(const SurvivalSample& sample, const std::vector<Eigen::VectorXd>& a,
                               const KernelSpec& spec);

/// w^T G w / n for an event-length weight vector; the quadratic sum is
/// accumulated with compensated summation. Negative rounding residue is
/// clamped to zero.
double event_quadratic_form(const GramMatrix& g, const Eigen::VectorXd& event_weights);

/// Kernel log-rank statistic: (1/n) * sum_ij G_ij. Computed as the unit-weight
/// quadratic form, so a Wild Bootstrap draw with W = 1 reproduces it exactly.
double statistic(const GramMatrix& g);

/// Convenience: statistic for a contrast matrix (basis, residuals, Gram).
double statistic_for(const SurvivalSample& sample, const ContrastMatrix& C, const KernelSpec& spec);

}  // namespace survtest
