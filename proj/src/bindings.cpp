#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "survtest/io.hpp"
#include "survtest/multiple.hpp"
#include "survtest/simulate.hpp"

namespace py = pybind11;
using namespace survtest;

namespace {

SurvivalSample make_sample(const Eigen::VectorXd& times, const std::vector<int>& status,
                           const std::vector<int>& groups, int k) {
    SurvivalSample sample;
    sample.times = times;
    sample.status = status;
    sample.groups = groups;
    sample.k = k;
    validate_sample(sample);
    return sample;
}

KernelSpec make_kernel(const std::string& text, bool rescale_times,
                       const std::vector<int>& group_labels) {
    KernelSpec spec = parse_kernel(text);
    spec.rescale_times = rescale_times;
    spec.group_labels = group_labels;
    spec.validate();
    return spec;
}

py::dict to_dict(const TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["critical_value"] = r.critical_value;
    d["p_value"] = r.p_value;
    d["reject"] = r.reject;
    return d;
}

py::dict to_dict(const MCTestResult& r) {
    py::list locals;
    for (const auto& l : r.locals) {
        py::dict d;
        d["label"] = l.label;
        d["statistic"] = l.statistic;
        d["critical_value"] = l.critical_value;
        d["p_value"] = l.p_value;
        d["reject"] = l.reject;
        locals.append(d);
    }
    py::dict d;
    d["locals"] = locals;
    d["beta_hat"] = r.beta_hat;
    d["global_reject"] = r.global_reject;
    return d;
}

}  // namespace

PYBIND11_MODULE(_survtest, m) {
    m.doc() = "Kernel log-rank tests for right-censored factorial designs";

    m.def(
        "statistic",
        [](const Eigen::VectorXd& times, const std::vector<int>& status,
           const std::vector<int>& groups, int k, const Eigen::MatrixXd& contrast,
           const std::string& kernel, bool rescale_times, const std::vector<int>& group_labels) {
            const auto sample = make_sample(times, status, groups, k);
            return statistic_for(sample, make_contrast(contrast),
                                 make_kernel(kernel, rescale_times, group_labels));
        },
        py::arg("times"), py::arg("status"), py::arg("groups"), py::arg("k"), py::arg("contrast"),
        py::arg("kernel") = "se:0.1,rq:2:1", py::arg("rescale_times") = false,
        py::arg("group_labels") = std::vector<int>{});

    m.def(
        "test",
        [](const Eigen::VectorXd& times, const std::vector<int>& status,
           const std::vector<int>& groups, int k, const Eigen::MatrixXd& contrast,
           const std::string& kernel, bool rescale_times, const std::vector<int>& group_labels,
           int reps, double alpha, std::uint64_t seed, const std::string& weights, int threads) {
            const auto sample = make_sample(times, status, groups, k);
            const WeightLaw law =
                weights == "normal" ? WeightLaw::Normal : WeightLaw::Rademacher;
            return to_dict(single_test(sample, make_contrast(contrast),
                                       make_kernel(kernel, rescale_times, group_labels), reps,
                                       alpha, seed, law, threads));
        },
        py::arg("times"), py::arg("status"), py::arg("groups"), py::arg("k"), py::arg("contrast"),
        py::arg("kernel") = "se:0.1,rq:2:1", py::arg("rescale_times") = false,
        py::arg("group_labels") = std::vector<int>{},
        py::arg("reps") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 0,
        py::arg("weights") = "rademacher", py::arg("threads") = 1);

    m.def(
        "mctest",
        [](const Eigen::VectorXd& times, const std::vector<int>& status,
           const std::vector<int>& groups, int k, const std::vector<Eigen::MatrixXd>& contrasts,
           const std::string& kernel, bool rescale_times, const std::vector<int>& group_labels,
           int reps, double alpha, std::uint64_t seed, const std::string& weights, int threads) {
            const auto sample = make_sample(times, status, groups, k);
            std::vector<ContrastMatrix> hyps;
            for (const auto& c : contrasts) hyps.push_back(make_contrast(c));
            const WeightLaw law =
                weights == "normal" ? WeightLaw::Normal : WeightLaw::Rademacher;
            return to_dict(mctest(sample, hyps, make_kernel(kernel, rescale_times, group_labels),
                                  reps, alpha, seed, law, threads));
        },
        py::arg("times"), py::arg("status"), py::arg("groups"), py::arg("k"), py::arg("contrasts"),
        py::arg("kernel") = "se:0.1,rq:2:1", py::arg("rescale_times") = false,
        py::arg("group_labels") = std::vector<int>{},
        py::arg("reps") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 0,
        py::arg("weights") = "rademacher", py::arg("threads") = 1);

    m.def(
        "hypothesis",
        [](const std::vector<int>& factor_levels, const std::string& spec) {
            FactorialDesign design;
            design.factor_levels = factor_levels;
            return parse_hypothesis(design, spec).entries;
        },
        py::arg("factor_levels"), py::arg("spec"),
        "Contrast matrix for main-effect:<f>, effect:<f>, interaction, dunnett or tukey");

    m.def(
        "kernel_labels",
        [](const std::vector<int>& factor_levels) {
            FactorialDesign design;
            design.factor_levels = factor_levels;
            return design.kernel_labels();
        },
        py::arg("factor_levels"),
        "Group-kernel labels: cells numbered with the first factor varying fastest");

    m.def(
        "simulate",
        [](const std::string& design_text, double theta, const std::string& censoring,
           const std::vector<int>& sizes, double balanced_n, std::uint64_t seed) {
            ScenarioConfig config;
            config.design = design_text == "A"   ? Design::A
                            : design_text == "B" ? Design::B
                                                 : Design::C;
            config.theta = theta;
            config.censoring = censoring == "low"      ? CensoringRegime::Low
                               : censoring == "medium" ? CensoringRegime::Medium
                                                       : CensoringRegime::High;
            config.explicit_sizes = sizes;
            config.balanced = true;
            config.size_param = balanced_n;
            config.seed = seed;
            const SurvivalSample sample = generate_dataset(config);
            py::dict d;
            d["times"] = sample.times;
            d["status"] = sample.status;
            d["groups"] = sample.groups;
            d["k"] = sample.k;
            return d;
        },
        py::arg("design") = "A", py::arg("theta") = 0.0, py::arg("censoring") = "low",
        py::arg("sizes") = std::vector<int>{}, py::arg("balanced_n") = 50.0, py::arg("seed") = 0);

    m.def(
        "load_dataset",
        [](const std::string& path, const std::string& time_col, const std::string& status_col,
           const std::vector<std::string>& factors) {
            const Dataset ds = load_dataset(path, time_col, status_col, factors);
            py::dict d;
            d["times"] = ds.sample.times;
            d["status"] = ds.sample.status;
            d["groups"] = ds.sample.groups;
            d["k"] = ds.sample.k;
            d["factor_levels"] = ds.design.factor_levels;
            d["group_counts"] = ds.group_counts;
            return d;
        },
        py::arg("path"), py::arg("time_col") = "time", py::arg("status_col") = "status",
        py::arg("factors") = std::vector<std::string>{"group"});

    m.attr("__version__") = kVersion;
}
