#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "survtest/bootstrap.hpp"
#include "survtest/contrasts.hpp"
#include "survtest/engine.hpp"

namespace survtest {

enum class Design { A, B, C };
enum class CensoringRegime { Low, Medium, High };

/// Closed-form cumulative hazard families used by the simulation designs.
struct HazardSpec {
    enum class Family {
        ConstantRate,  // lambda * t
        CosSq,         // hazard cos^2(2t):  t/2 + sin(4t)/8
        SinSq,         // hazard sin^2(2t):  t/2 - sin(4t)/8
        DataC,         // additive design-C cell hazard, parameter theta >= -1
        Weibull,       // cumulative (rate * t)^shape (censoring families)
    };
    Family family = Family::ConstantRate;
    double rate = 1.0;     // ConstantRate / Weibull
    double shape = 1.0;    // Weibull
    double theta = 0.0;    // DataC
    int level_i = 1;       // DataC cell
    int level_j = 1;

    double cumulative(double t) const;
};

/// Unique t with cumulative(t) == target, by bracket doubling + bisection
/// (absolute tolerance 1e-10). Throws on non-convergence.
double invert_cumhaz(const HazardSpec& spec, double target);

/// Inverse-transform draw: solve cumulative(t) = E with E ~ Exp(1).
double sample_time(const HazardSpec& spec, std::mt19937_64& rng);

struct ScenarioConfig {
    Design design = Design::A;
    double theta = 0.0;  // Data C interaction strength
    CensoringRegime censoring = CensoringRegime::Low;
    bool balanced = true;
    double size_param = 50.0;         // per-group size (balanced) or multiplier (unbalanced)
    std::vector<int> explicit_sizes;  // when nonempty, overrides the two modes above
    std::uint64_t seed = 0;
};

FactorialDesign scenario_design(Design design);
std::vector<int> scenario_sizes(const ScenarioConfig& config);
HazardSpec scenario_hazard(Design design, double theta, int group);
HazardSpec scenario_censoring(Design design, CensoringRegime regime, int group);

SurvivalSample generate_dataset(const ScenarioConfig& config);

struct PowerConfig {
    ScenarioConfig scenario;  // scenario.seed is ignored; master_seed drives everything
    std::vector<ContrastMatrix> hypotheses;
    KernelSpec kernel;
    int replications = 1000;
    int boot_M = 1000;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    std::uint64_t cell_id = 0;  // distinguishes grid cells under one master seed
    WeightLaw weight_law = WeightLaw::Rademacher;
    int threads = 1;
};

struct PowerResult {
    double rejection_rate = 0.0;
    double mc_se = 0.0;
    int replications = 0;
};

/// Monte Carlo rejection rate over independent replications; replicate r uses
/// the streams (master_seed, cell_id, r), so results are reproducible for any
/// thread count. One hypothesis runs Algorithm-1 tests; several run the
/// multiple-contrast procedure (global decision).
PowerResult power_study(const PowerConfig& config);

}  // namespace survtest
