#include "survtest/teststat.hpp"

namespace survtest {

double GramMatrix::full_entry(int i, int j) const {
    int ri = -1, rj = -1;
    for (std::size_t p = 0; p < event_rows.size(); ++p) {
        if (event_rows[p] == i) ri = static_cast<int>(p);
        if (event_rows[p] == j) rj = static_cast<int>(p);
    }
    if (ri < 0 || rj < 0) return 0.0;
    return G(ri, rj);
}

GramMatrix gram_from_residuals(const SurvivalSample& sample, const std::vector<Eigen::VectorXd>& a,
                               const KernelSpec& spec) {
    spec.validate();
    const int n = sample.n();
    const Eigen::VectorXd times = spec.rescale_times ? rescale(sample.times) : sample.times;
    const Eigen::MatrixXd J = group_kernel_matrix(spec, sample.k);

    GramMatrix out;
    out.n = n;
    for (int i = 0; i < n; ++i)
        if (sample.status[i] == 1) out.event_rows.push_back(i);
    const int m = static_cast<int>(out.event_rows.size());

    // b_i = J a_i so that a_i^T J a_j = a_i . b_j
    Eigen::MatrixXd A(sample.k, m), B(sample.k, m);
    for (int p = 0; p < m; ++p) {
        A.col(p) = a[out.event_rows[p]];
        B.col(p) = J * A.col(p);
    }
    const Eigen::MatrixXd inner = A.transpose() * B;  // symmetric since J is

    out.G.resize(m, m);
    for (int p = 0; p < m; ++p) {
        const double tp = times(out.event_rows[p]);
        for (int q = 0; q <= p; ++q) {
            const double v = time_kernel_eval(spec, tp, times(out.event_rows[q])) * inner(p, q);
            out.G(p, q) = v;
            out.G(q, p) = v;
        }
    }
    return out;
}

GramMatrix gram(const SurvivalSample& sample, const Eigen::MatrixXd& V, const KernelSpec& spec) {
    return gram_from_residuals(sample, residual_vectors(sample, V), spec);
}

double event_quadratic_form(const GramMatrix& g, const Eigen::VectorXd& event_weights) {
    const Eigen::VectorXd u = g.G * event_weights;
    // Kahan accumulation of the outer sum.
    double sum = 0.0, comp = 0.0;
    for (Eigen::Index p = 0; p < u.size(); ++p) {
        const double y = event_weights(p) * u(p) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double value = sum / static_cast<double>(g.n);
    return value < 0.0 ? 0.0 : value;
}

double statistic(const GramMatrix& g) {
    return event_quadratic_form(g, Eigen::VectorXd::Ones(g.G.rows()));
}

double statistic_for(const SurvivalSample& sample, const ContrastMatrix& C, const KernelSpec& spec) {
    return statistic(gram(sample, null_space_basis(C), spec));
}

}  // namespace survtest
