#include "survtest/engine.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "survtest/errors.hpp"

namespace survtest {

namespace {

constexpr double kRankTol = 1e-10;

// Indices sorted ascending by (time, original index).
std::vector<int> time_order(const SurvivalSample& sample) {
    std::vector<int> order(sample.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sample.times(a) < sample.times(b); });
    return order;
}

// SVD of Xhat = diag(Y) V / n. Returns thin U (k x rank) and singular values.
struct XhatSvd {
    Eigen::MatrixXd U;
    Eigen::MatrixXd V;
    Eigen::VectorXd sigma;
    int rank = 0;
};

XhatSvd xhat_svd(const Eigen::VectorXd& risk, const Eigen::MatrixXd& V, int n) {
    Eigen::MatrixXd X = risk.asDiagonal() * V / static_cast<double>(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    XhatSvd out;
    out.sigma = svd.singularValues();
    const double tol = out.sigma.size() > 0 ? kRankTol * out.sigma(0) : 0.0;
    for (Eigen::Index i = 0; i < out.sigma.size(); ++i)
        if (out.sigma(i) > tol && out.sigma(i) > 0.0) ++out.rank;
    out.U = svd.matrixU().leftCols(out.rank);
    out.V = svd.matrixV().leftCols(out.rank);
    return out;
}

}  // namespace

int SurvivalSample::num_events() const {
    int e = 0;
    for (int s : status) e += s;
    return e;
}

void validate_sample(const SurvivalSample& sample) {
    const int n = sample.n();
    if (static_cast<int>(sample.status.size()) != n || static_cast<int>(sample.groups.size()) != n)
        throw SchemaError("times/status/groups length mismatch");
    if (sample.k < 1) throw SchemaError("group count must be positive");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(sample.times(i)) || sample.times(i) <= 0.0)
            throw SchemaError("nonpositive or non-finite time at observation " + std::to_string(i + 1));
        if (sample.status[i] != 0 && sample.status[i] != 1)
            throw SchemaError("status outside {0,1} at observation " + std::to_string(i + 1));
        if (sample.groups[i] < 1 || sample.groups[i] > sample.k)
            throw SchemaError("group label out of 1..k at observation " + std::to_string(i + 1));
    }
}

EventTable event_table(const SurvivalSample& sample) {
    validate_sample(sample);
    if (sample.num_events() == 0)
        throw DegenerateDataError("sample contains no events; test statistic is undefined");

    const auto order = time_order(sample);
    Eigen::VectorXd risk = Eigen::VectorXd::Zero(sample.k);
    for (int g : sample.groups) risk(g - 1) += 1.0;

    EventTable table;
    std::size_t removed = 0;  // observations with T < current time, already out of the risk set
    for (std::size_t p = 0; p < order.size(); ++p) {
        const int i = order[p];
        const double t = sample.times(i);
        while (removed < p && sample.times(order[removed]) < t) {
            risk(sample.groups[order[removed]] - 1) -= 1.0;
            ++removed;
        }
        if (sample.status[i] == 1)
            table.events.push_back(EventRecord{t, sample.groups[i], i, risk});
    }
    return table;
}

ProjectionAt projection_at(const Eigen::VectorXd& risk, const Eigen::MatrixXd& V, int n) {
    const int k = static_cast<int>(risk.size());
    const int d = static_cast<int>(V.cols());
    const auto svd = xhat_svd(risk, V, n);
    ProjectionAt out;
    out.full_rank = svd.rank == d;
    if (out.full_rank) {
        out.Q = Eigen::MatrixXd::Identity(k, k) - svd.U * svd.U.transpose();
    } else {
        out.Q = Eigen::MatrixXd::Zero(k, k);
    }
    return out;
}

std::vector<Eigen::VectorXd> residual_vectors(const SurvivalSample& sample, const Eigen::MatrixXd& V) {
    const int n = sample.n();
    const int k = sample.k;
    std::vector<Eigen::VectorXd> a(n, Eigen::VectorXd::Zero(k));

    const auto table = event_table(sample);
    ProjectionAt proj;
    double current_time = -1.0;
    bool have_proj = false;
    for (const auto& ev : table.events) {
        if (!have_proj || ev.time != current_time) {
            proj = projection_at(ev.risk, V, n);
            current_time = ev.time;
            have_proj = true;
        }
        if (proj.full_rank) a[ev.sample_index] = proj.Q.col(ev.group - 1);
    }
    return a;
}

double weighted_logrank(const SurvivalSample& sample, const Eigen::MatrixXd& V,
                        const std::function<double(double, int)>& w) {
    const auto a = residual_vectors(sample, V);
    double acc = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        if (sample.status[i] == 0) continue;
        for (int g = 1; g <= sample.k; ++g) acc += w(sample.times(i), g) * a[i](g - 1);
    }
    return acc / std::sqrt(static_cast<double>(sample.n()));
}

Eigen::VectorXd StepFunction::eval(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return Eigen::VectorXd::Zero(dim);
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

StepFunction constrained_cumhaz(const SurvivalSample& sample, const Eigen::MatrixXd& V) {
    const int n = sample.n();
    const int k = sample.k;
    const int d = static_cast<int>(V.cols());
    const auto table = event_table(sample);

    StepFunction fn;
    fn.dim = k;
    Eigen::VectorXd cum = Eigen::VectorXd::Zero(k);

    std::size_t p = 0;
    while (p < table.events.size()) {
        const double t = table.events[p].time;
        Eigen::VectorXd dN = Eigen::VectorXd::Zero(k);
        const Eigen::VectorXd& risk = table.events[p].risk;
        while (p < table.events.size() && table.events[p].time == t) {
            dN(table.events[p].group - 1) += 1.0;
            ++p;
        }
        const auto svd = xhat_svd(risk, V, n);
        if (svd.rank == d) {
            // dLambda = (1/n) V pinv(Xhat) dN
            const Eigen::VectorXd coeffs =
                svd.sigma.head(svd.rank).cwiseInverse().asDiagonal() * (svd.U.transpose() * dN);
            cum += V * (svd.V * coeffs) / static_cast<double>(n);
        }
        fn.times.push_back(t);
        fn.values.push_back(cum);
    }
    return fn;
}

StepFunction nelson_aalen(const SurvivalSample& sample) {
    const auto table = event_table(sample);
    StepFunction fn;
    fn.dim = sample.k;
    Eigen::VectorXd cum = Eigen::VectorXd::Zero(sample.k);
    std::size_t p = 0;
    while (p < table.events.size()) {
        const double t = table.events[p].time;
        const Eigen::VectorXd& risk = table.events[p].risk;
        Eigen::VectorXd dN = Eigen::VectorXd::Zero(sample.k);
        while (p < table.events.size() && table.events[p].time == t) {
            dN(table.events[p].group - 1) += 1.0;
            ++p;
        }
        for (int g = 0; g < sample.k; ++g)
            if (dN(g) > 0.0) cum(g) += dN(g) / risk(g);
        fn.times.push_back(t);
        fn.values.push_back(cum);
    }
    return fn;
}

}  // namespace survtest
