#include "survtest/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "survtest/errors.hpp"
#include "survtest/multiple.hpp"
#include "survtest/parallel.hpp"
#include "survtest/rng.hpp"

namespace survtest {

namespace {

// Cumulative versions of the design-C additive components.
double phi_cum(int i, double t) {
    switch (i) {
        case 1: return -5.0 * t / 24.0 + 0.75 * std::log1p(t * t);
        case 2: return 13.0 * t / 24.0 - 0.75 * std::log1p(t * t);
        default: return -t / 3.0;
    }
}

double psi_cum(int j, double t) {
    return (j == 1) ? -0.5 * t : (j == 3 ? 0.5 * t : 0.0);
}

double sigma_cum(int i, int j, double theta, double t) {
    return (i == 1 && j == 2) ? 5.0 * theta * t / 6.0 : -theta * t / 6.0;
}

const std::vector<int>& unbalanced_proportions(Design design) {
    // Paper-order proportions rearranged to the lexicographic group order.
    static const std::vector<int> ab = {15, 5, 7, 9, 9, 6};
    static const std::vector<int> c = {15, 9, 8, 9, 7, 5, 5, 6, 11};
    return design == Design::C ? c : ab;
}

}  // namespace

double HazardSpec::cumulative(double t) const {
    switch (family) {
        case Family::ConstantRate:
            return rate * t;
        case Family::CosSq:
            return t / 2.0 + std::sin(4.0 * t) / 8.0;
        case Family::SinSq:
            return t / 2.0 - std::sin(4.0 * t) / 8.0;
        case Family::DataC:
            return (29.0 / 24.0) * t + phi_cum(level_i, t) + psi_cum(level_j, t) +
                   sigma_cum(level_i, level_j, theta, t);
        case Family::Weibull:
            return std::pow(rate * t, shape);
    }
    return 0.0;
}

double invert_cumhaz(const HazardSpec& spec, double target) {
    if (target <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    int iter = 0;
    while (spec.cumulative(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++iter > 200) throw std::runtime_error("cumulative hazard failed to reach target");
    }
    for (iter = 0; iter < 200 && hi - lo > 1e-10; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (spec.cumulative(mid) < target ? lo : hi) = mid;
    }
    if (hi - lo > 1e-10) throw std::runtime_error("root finder did not converge");
    return 0.5 * (lo + hi);
}

double sample_time(const HazardSpec& spec, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    return invert_cumhaz(spec, exp1(rng));
}

FactorialDesign scenario_design(Design design) {
    FactorialDesign d;
    d.factor_levels = design == Design::C ? std::vector<int>{3, 3} : std::vector<int>{2, 3};
    d.factor_names = {"I", "J"};
    return d;
}

std::vector<int> scenario_sizes(const ScenarioConfig& config) {
    const int k = scenario_design(config.design).num_groups();
    if (!config.explicit_sizes.empty()) {
        if (static_cast<int>(config.explicit_sizes.size()) != k)
            throw SchemaError("expected " + std::to_string(k) + " group sizes");
        return config.explicit_sizes;
    }
    std::vector<int> sizes(k);
    if (config.balanced) {
        const int per = static_cast<int>(config.size_param);
        for (int& s : sizes) s = per;
    } else {
        const auto& props = unbalanced_proportions(config.design);
        for (int g = 0; g < k; ++g)
            sizes[g] = static_cast<int>(std::floor(config.size_param * props[g]));
    }
    for (int s : sizes)
        if (s < 1) throw SchemaError("every group needs at least one subject");
    return sizes;
}

HazardSpec scenario_hazard(Design design, double theta, int group) {
    const FactorialDesign fd = scenario_design(design);
    const auto tuple = fd.level_tuple(group);
    const int i = tuple[0], j = tuple[1];
    HazardSpec h;
    switch (design) {
        case Design::A: {
            // Rate table: lambda_12 = lambda_21 = 2, all other cells 1.
            h.family = HazardSpec::Family::ConstantRate;
            h.rate = ((i == 1 && j == 2) || (i == 2 && j == 1)) ? 2.0 : 1.0;
            break;
        }
        case Design::B: {
            if (j == 3)
                h.family = HazardSpec::Family::ConstantRate;
            else if ((i == 1 && j == 1) || (i == 2 && j == 2))
                h.family = HazardSpec::Family::CosSq;
            else
                h.family = HazardSpec::Family::SinSq;
            break;
        }
        case Design::C: {
            if (theta < -1.0) throw SchemaError("design C requires theta >= -1");
            h.family = HazardSpec::Family::DataC;
            h.theta = theta;
            h.level_i = i;
            h.level_j = j;
            break;
        }
    }
    return h;
}

HazardSpec scenario_censoring(Design design, CensoringRegime regime, int group) {
    HazardSpec h;
    if (design == Design::C) {
        const double rc = regime == CensoringRegime::Low ? 0.1
                        : regime == CensoringRegime::Medium ? 0.5 : 1.0;
        const int i = scenario_design(design).level_tuple(group)[0];
        h.family = HazardSpec::Family::Weibull;
        h.rate = rc;
        h.shape = i == 1 ? 1.0 : (i == 2 ? 0.5 : 1.5);
    } else {
        h.family = HazardSpec::Family::ConstantRate;
        if (design == Design::A)
            h.rate = regime == CensoringRegime::Low ? 0.1
                   : regime == CensoringRegime::Medium ? 0.5 : 2.0;
        else
            h.rate = regime == CensoringRegime::Low ? 0.1
                   : regime == CensoringRegime::Medium ? 0.3 : 0.6;
    }
    return h;
}

SurvivalSample generate_dataset(const ScenarioConfig& config) {
    const auto sizes = scenario_sizes(config);
    const int k = static_cast<int>(sizes.size());
    int n = 0;
    for (int s : sizes) n += s;

    SurvivalSample sample;
    sample.k = k;
    sample.times.resize(n);
    sample.status.resize(n);
    sample.groups.resize(n);

    auto rng = stream_rng(config.seed, 0);
    int idx = 0;
    for (int g = 1; g <= k; ++g) {
        const HazardSpec survival = scenario_hazard(config.design, config.theta, g);
        const HazardSpec censoring = scenario_censoring(config.design, config.censoring, g);
        for (int s = 0; s < sizes[g - 1]; ++s, ++idx) {
            const double z = sample_time(survival, rng);
            const double c = sample_time(censoring, rng);
            sample.times(idx) = std::min(z, c);
            sample.status[idx] = z <= c ? 1 : 0;
            sample.groups[idx] = g;
        }
    }
    return sample;
}

PowerResult power_study(const PowerConfig& config) {
    if (config.replications < 1) throw SchemaError("replication count must be >= 1");
    if (config.hypotheses.empty()) throw SchemaError("no hypotheses given");

    KernelSpec kernel = config.kernel;
    if (kernel.group_labels.empty())
        kernel.group_labels = scenario_design(config.scenario.design).kernel_labels();

    std::vector<char> rejected(config.replications, 0);
    parallel_for(static_cast<std::size_t>(config.replications), config.threads, [&](std::size_t r) {
        ScenarioConfig scenario = config.scenario;
        scenario.seed = derive_seed(config.master_seed, config.cell_id, 2 * r);
        const std::uint64_t boot_seed = derive_seed(config.master_seed, config.cell_id, 2 * r + 1);
        try {
            const SurvivalSample data = generate_dataset(scenario);
            if (config.hypotheses.size() == 1) {
                const auto res = single_test(data, config.hypotheses.front(), kernel,
                                             config.boot_M, config.alpha, boot_seed,
                                             config.weight_law, 1);
                rejected[r] = res.reject ? 1 : 0;
            } else {
                const auto res = mctest(data, config.hypotheses, kernel, config.boot_M,
                                        config.alpha, boot_seed, config.weight_law, 1);
                rejected[r] = res.global_reject ? 1 : 0;
            }
        } catch (const DegenerateDataError&) {
            rejected[r] = 0;  // untestable replicate counts as a non-rejection
        }
    });

    int count = 0;
    for (char c : rejected) count += c;
    PowerResult out;
    out.replications = config.replications;
    out.rejection_rate = static_cast<double>(count) / config.replications;
    out.mc_se = std::sqrt(out.rejection_rate * (1.0 - out.rejection_rate) / config.replications);
    return out;
}

}  // namespace survtest
