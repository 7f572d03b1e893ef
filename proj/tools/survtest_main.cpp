#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "survtest/errors.hpp"
#include "survtest/io.hpp"
#include "survtest/multiple.hpp"
#include "survtest/simulate.hpp"

namespace {

using namespace survtest;

struct DataFlags {
    std::string path;
    std::string time_col = "time";
    std::string status_col = "status";
    std::string factors = "group";
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.path, "Input dataset (delimited text with header)")->required();
    cmd->add_option("--time-col", flags.time_col, "Name of the time column");
    cmd->add_option("--status-col", flags.status_col, "Name of the status column");
    cmd->add_option("--factors", flags.factors, "Comma-separated factor column names");
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Dataset load(const DataFlags& flags) {
    return load_dataset(flags.path, flags.time_col, flags.status_col, split_csv(flags.factors));
}

WeightLaw parse_weights(const std::string& text) {
    if (text == "rademacher") return WeightLaw::Rademacher;
    if (text == "normal") return WeightLaw::Normal;
    throw SchemaError("unknown weight law '" + text + "'");
}

bool parse_on_off(const std::string& text) {
    if (text == "on") return true;
    if (text == "off") return false;
    throw SchemaError("expected 'on' or 'off', got '" + text + "'");
}

Design parse_design(const std::string& text) {
    if (text == "A") return Design::A;
    if (text == "B") return Design::B;
    if (text == "C") return Design::C;
    throw SchemaError("unknown design '" + text + "'");
}

CensoringRegime parse_censoring(const std::string& text) {
    if (text == "low") return CensoringRegime::Low;
    if (text == "medium") return CensoringRegime::Medium;
    if (text == "high") return CensoringRegime::High;
    throw SchemaError("unknown censoring regime '" + text + "'");
}

void parse_sizes(const std::string& text, ScenarioConfig& scenario) {
    if (text.rfind("balanced:", 0) == 0) {
        scenario.balanced = true;
        scenario.size_param = std::stod(text.substr(9));
        return;
    }
    scenario.explicit_sizes.clear();
    for (const auto& field : split_csv(text)) scenario.explicit_sizes.push_back(std::stoi(field));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw SchemaError("cannot write '" + out_path + "'");
    out << text;
}

int run(int argc, char** argv) {
    CLI::App app{"Kernel log-rank tests for right-censored factorial designs"};
    app.require_subcommand(1);

    DataFlags data_flags;
    std::vector<std::string> hypothesis_specs;
    std::string hypotheses_file;
    bool split = false;
    std::string kernel_text = "se:0.1,rq:2:1";
    std::string rescale_text = "off";
    int reps = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::string weights_text = "rademacher";
    std::string out_path;
    std::string format = "text";
    int threads = 1;

    auto add_test_flags = [&](CLI::App* cmd) {
        add_data_flags(cmd, data_flags);
        cmd->add_option("--kernel", kernel_text, "Kernel spec, e.g. se:0.1,rq:2:1 or ou:1,id");
        cmd->add_option("--rescale-times", rescale_text, "Divide times by the maximum: on|off");
        cmd->add_option("--reps", reps, "Bootstrap replications M");
        cmd->add_option("--alpha", alpha, "Significance level");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--weights", weights_text, "Bootstrap weights: rademacher|normal");
        cmd->add_option("--out", out_path, "Write the result document here instead of stdout");
        cmd->add_option("--format", format, "Output format: json|text");
        cmd->add_option("--threads", threads, "Worker threads");
    };

    CLI::App* test_cmd = app.add_subcommand("test", "Single kernel log-rank test");
    add_test_flags(test_cmd);
    test_cmd->add_option("--hypothesis", hypothesis_specs,
                         "Hypothesis, e.g. main-effect:<factor>, effect:<factor>, interaction, "
                         "dunnett, tukey");

    CLI::App* mctest_cmd = app.add_subcommand("mctest", "Multiple contrast test");
    add_test_flags(mctest_cmd);
    mctest_cmd->add_option("--hypothesis", hypothesis_specs, "Local hypothesis (repeatable)");
    mctest_cmd->add_option("--hypotheses", hypotheses_file, "File with one hypothesis per line");
    mctest_cmd->add_flag("--split", split, "Split each hypothesis into one-row local hypotheses");

    CLI::App* curves_cmd = app.add_subcommand("curves", "Per-group Nelson-Aalen estimates as CSV");
    add_data_flags(curves_cmd, data_flags);
    curves_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

    std::string design_text = "A";
    double theta = 0.0;
    std::string censoring_text = "low";
    std::string sizes_text = "balanced:50";
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Draw one dataset from a study design");
    sim_cmd->add_option("--design", design_text, "Design: A|B|C")->required();
    sim_cmd->add_option("--theta", theta, "Design C interaction strength");
    sim_cmd->add_option("--censoring", censoring_text, "Censoring regime: low|medium|high");
    sim_cmd->add_option("--sizes", sizes_text, "Group sizes: comma list or balanced:<n>");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

    std::string grid_text = "50";
    bool unbalanced = false;
    int boot = 500;
    CLI::App* power_cmd = app.add_subcommand("power", "Monte Carlo rejection rates over a size grid");
    power_cmd->add_option("--design", design_text, "Design: A|B|C")->required();
    power_cmd->add_option("--theta", theta, "Design C interaction strength");
    power_cmd->add_option("--censoring", censoring_text, "Censoring regime: low|medium|high");
    power_cmd->add_option("--grid", grid_text,
                          "Comma list of per-group sizes (or multipliers with --unbalanced)");
    power_cmd->add_flag("--unbalanced", unbalanced, "Use the unbalanced size proportions");
    power_cmd->add_option("--hypothesis", hypothesis_specs, "Hypothesis (repeatable)");
    power_cmd->add_option("--kernel", kernel_text, "Kernel spec");
    power_cmd->add_option("--rescale-times", rescale_text, "Divide times by the maximum: on|off");
    power_cmd->add_option("--reps", reps, "Monte Carlo replications");
    power_cmd->add_option("--boot", boot, "Bootstrap replications per replicate");
    power_cmd->add_option("--alpha", alpha, "Significance level");
    power_cmd->add_option("--seed", seed, "Master RNG seed");
    power_cmd->add_option("--weights", weights_text, "Bootstrap weights: rademacher|normal");
    power_cmd->add_option("--threads", threads, "Worker threads");
    power_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (test_cmd->parsed()) {
        if (hypothesis_specs.size() != 1)
            throw SchemaError("'test' needs exactly one --hypothesis");
        const Dataset ds = load(data_flags);
        KernelSpec spec = parse_kernel(kernel_text);
        spec.rescale_times = parse_on_off(rescale_text);
        spec.group_labels = ds.design.kernel_labels();
        const ContrastMatrix C = parse_hypothesis(ds.design, hypothesis_specs.front());
        const TestResult res = single_test(ds.sample, C, spec, reps, alpha, seed,
                                           parse_weights(weights_text), threads);
        if (format == "json")
            emit(result_document(res, spec, C.label), out_path);
        else if (format == "text")
            emit(result_table(res, C.label), out_path);
        else
            throw SchemaError("unsupported format '" + format + "' for test");
        return 0;
    }

    if (mctest_cmd->parsed()) {
        const Dataset ds = load(data_flags);
        if (!hypotheses_file.empty()) {
            std::ifstream in(hypotheses_file);
            if (!in) throw SchemaError("cannot open '" + hypotheses_file + "'");
            std::string line;
            while (std::getline(in, line)) {
                while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                    line.pop_back();
                if (!line.empty()) hypothesis_specs.push_back(line);
            }
        }
        if (hypothesis_specs.empty())
            throw SchemaError("'mctest' needs --hypothesis or --hypotheses");
        std::vector<ContrastMatrix> locals;
        for (const auto& text : hypothesis_specs) {
            ContrastMatrix C = parse_hypothesis(ds.design, text);
            if (split) {
                for (auto& row : split_rows(C)) locals.push_back(std::move(row));
            } else {
                locals.push_back(std::move(C));
            }
        }
        KernelSpec spec = parse_kernel(kernel_text);
        spec.rescale_times = parse_on_off(rescale_text);
        spec.group_labels = ds.design.kernel_labels();
        const MCTestResult res =
            mctest(ds.sample, locals, spec, reps, alpha, seed, parse_weights(weights_text), threads);
        if (format == "json")
            emit(result_document(res, spec), out_path);
        else if (format == "text")
            emit(result_table(res), out_path);
        else
            throw SchemaError("unsupported format '" + format + "' for mctest");
        return 0;
    }

    if (curves_cmd->parsed()) {
        const Dataset ds = load(data_flags);
        const StepFunction na = nelson_aalen(ds.sample);
        std::ostringstream csv;
        csv << "time";
        for (int g = 1; g <= ds.sample.k; ++g) csv << ",group_" << g;
        csv << '\n';
        csv.precision(17);
        for (std::size_t i = 0; i < na.times.size(); ++i) {
            csv << na.times[i];
            for (int g = 0; g < na.dim; ++g) csv << ',' << na.values[i](g);
            csv << '\n';
        }
        emit(csv.str(), out_path);
        return 0;
    }

    if (sim_cmd->parsed()) {
        ScenarioConfig scenario;
        scenario.design = parse_design(design_text);
        scenario.theta = theta;
        scenario.censoring = parse_censoring(censoring_text);
        parse_sizes(sizes_text, scenario);
        scenario.seed = seed;
        const SurvivalSample sample = generate_dataset(scenario);
        const FactorialDesign design = scenario_design(scenario.design);
        if (out_path.empty()) {
            std::ostringstream csv;
            csv << "time,status";
            for (const auto& name : design.factor_names) csv << ',' << name;
            csv << '\n';
            csv.precision(17);
            for (int i = 0; i < sample.n(); ++i) {
                csv << sample.times(i) << ',' << sample.status[i];
                for (int lev : design.level_tuple(sample.groups[i])) csv << ',' << lev;
                csv << '\n';
            }
            std::cout << csv.str();
        } else {
            write_dataset(out_path, sample, design);
        }
        return 0;
    }

    // power
    PowerConfig config;
    config.scenario.design = parse_design(design_text);
    config.scenario.theta = theta;
    config.scenario.censoring = parse_censoring(censoring_text);
    config.scenario.balanced = !unbalanced;
    const FactorialDesign design = scenario_design(config.scenario.design);
    if (hypothesis_specs.empty()) hypothesis_specs = {"interaction"};
    for (const auto& text : hypothesis_specs)
        config.hypotheses.push_back(parse_hypothesis(design, text));
    config.kernel = parse_kernel(kernel_text);
    config.kernel.rescale_times = parse_on_off(rescale_text);
    config.replications = reps;
    config.boot_M = boot;
    config.alpha = alpha;
    config.master_seed = seed;
    config.weight_law = parse_weights(weights_text);
    config.threads = threads;

    std::ostringstream csv;
    csv << "design,censoring,size_multiplier,kernel,rejection_rate,mc_se\n";
    std::uint64_t cell = 0;
    for (const auto& field : split_csv(grid_text)) {
        config.scenario.size_param = std::stod(field);
        config.cell_id = cell++;
        const PowerResult res = power_study(config);
        csv << design_text << ',' << censoring_text << ',' << field << ','
            << config.kernel.describe() << ',' << res.rejection_rate << ',' << res.mc_se << '\n';
    }
    emit(csv.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
