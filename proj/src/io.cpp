#include "survtest/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include "json.hpp"
#include <set>
#include <sstream>

#include "survtest/errors.hpp"
#include "survtest/kernels.hpp"

namespace survtest {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
            field.pop_back();
        std::size_t start = field.find_first_not_of(' ');
        fields.push_back(start == std::string::npos ? "" : field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& text, int row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("row " + std::to_string(row) + ": column '" + col +
                          "' has non-numeric value '" + text + "'");
    }
}

int parse_int(const std::string& text, int row, const std::string& col) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("row " + std::to_string(row) + ": column '" + col +
                          "' has non-integer value '" + text + "'");
    }
}

const char* law_name(WeightLaw law) {
    return law == WeightLaw::Rademacher ? "rademacher" : "normal";
}

nlohmann::json config_json(const KernelSpec& spec, int M, double alpha, std::uint64_t seed,
                           WeightLaw law) {
    return nlohmann::json{
        {"kernel", spec.describe()},
        {"rescale_times", spec.rescale_times},
        {"group_labels", spec.group_labels},
        {"bootstrap_replications", M},
        {"alpha", alpha},
        {"seed", seed},
        {"weights", law_name(law)},
        {"version", kVersion},
    };
}

}  // namespace

Dataset load_dataset(const std::string& path, const std::string& time_col,
                     const std::string& status_col, const std::vector<std::string>& factor_cols) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    if (factor_cols.empty()) throw SchemaError("at least one factor column is required");

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    const auto header = split_line(line);

    auto column_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw SchemaError("missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t time_idx = column_of(time_col);
    const std::size_t status_idx = column_of(status_col);
    std::vector<std::size_t> factor_idx;
    for (const auto& f : factor_cols) factor_idx.push_back(column_of(f));

    std::vector<double> times;
    std::vector<int> status;
    std::vector<std::vector<int>> levels(factor_cols.size());
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size())
            throw SchemaError("row " + std::to_string(row) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        const double t = parse_double(fields[time_idx], row, time_col);
        if (!(t > 0.0))
            throw SchemaError("row " + std::to_string(row) + ": time must be positive");
        const int s = parse_int(fields[status_idx], row, status_col);
        if (s != 0 && s != 1)
            throw SchemaError("row " + std::to_string(row) + ": status must be 0 or 1");
        times.push_back(t);
        status.push_back(s);
        for (std::size_t f = 0; f < factor_cols.size(); ++f) {
            const int lev = parse_int(fields[factor_idx[f]], row, factor_cols[f]);
            if (lev < 1)
                throw SchemaError("row " + std::to_string(row) + ": factor '" + factor_cols[f] +
                                  "' levels must be >= 1");
            levels[f].push_back(lev);
        }
    }
    if (times.empty()) throw SchemaError("'" + path + "' has no data rows");

    Dataset ds;
    ds.design.factor_names = factor_cols;
    for (std::size_t f = 0; f < factor_cols.size(); ++f) {
        const std::set<int> seen(levels[f].begin(), levels[f].end());
        const int max_level = *seen.rbegin();
        for (int l = 1; l <= max_level; ++l)
            if (!seen.count(l))
                throw SchemaError("factor '" + factor_cols[f] + "' has no observations at level " +
                                  std::to_string(l));
        ds.design.factor_levels.push_back(max_level);
    }

    const int n = static_cast<int>(times.size());
    ds.sample.k = ds.design.num_groups();
    ds.sample.times = Eigen::Map<Eigen::VectorXd>(times.data(), n);
    ds.sample.status = std::move(status);
    ds.sample.groups.resize(n);
    ds.group_counts.assign(ds.sample.k, 0);
    std::vector<int> tuple(factor_cols.size());
    for (int i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < factor_cols.size(); ++f) tuple[f] = levels[f][i];
        ds.sample.groups[i] = ds.design.group_index(tuple);
        ++ds.group_counts[ds.sample.groups[i] - 1];
    }
    validate_sample(ds.sample);
    return ds;
}

void write_dataset(const std::string& path, const SurvivalSample& sample,
                   const FactorialDesign& design) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "time,status";
    for (int f = 0; f < design.num_factors(); ++f) {
        out << ',';
        out << (static_cast<int>(design.factor_names.size()) > f ? design.factor_names[f]
                                                                 : "f" + std::to_string(f + 1));
    }
    out << '\n';
    out << std::setprecision(17);
    for (int i = 0; i < sample.n(); ++i) {
        out << sample.times(i) << ',' << sample.status[i];
        for (int lev : design.level_tuple(sample.groups[i])) out << ',' << lev;
        out << '\n';
    }
}

std::string result_document(const TestResult& result, const KernelSpec& spec,
                            const std::string& hypothesis_label) {
    nlohmann::json doc{
        {"hypothesis", hypothesis_label},
        {"statistic", result.statistic},
        {"critical_value", result.critical_value},
        {"p_value", result.p_value},
        {"reject", result.reject},
        {"config", config_json(spec, result.M, result.alpha, result.seed, result.weight_law)},
    };
    return doc.dump(2);
}

std::string result_document(const MCTestResult& result, const KernelSpec& spec) {
    nlohmann::json locals = nlohmann::json::array();
    for (const auto& l : result.locals) {
        locals.push_back({{"hypothesis", l.label},
                          {"statistic", l.statistic},
                          {"critical_value", l.critical_value},
                          {"p_value", l.p_value},
                          {"reject", l.reject}});
    }
    nlohmann::json doc{
        {"locals", locals},
        {"beta_hat", result.beta_hat},
        {"global_reject", result.global_reject},
        {"config", config_json(spec, result.M, result.alpha, result.seed, result.weight_law)},
    };
    return doc.dump(2);
}

std::string result_table(const TestResult& result, const std::string& hypothesis_label) {
    std::ostringstream out;
    out << std::setprecision(6);
    out << "hypothesis      " << hypothesis_label << '\n'
        << "statistic       " << result.statistic << '\n'
        << "critical value  " << result.critical_value << '\n'
        << "p-value         " << result.p_value << '\n'
        << "decision        " << (result.reject ? "reject" : "retain") << '\n';
    return out.str();
}

std::string result_table(const MCTestResult& result) {
    std::ostringstream out;
    out << std::setprecision(6);
    std::size_t width = 10;
    for (const auto& l : result.locals) width = std::max(width, l.label.size());
    out << std::left << std::setw(static_cast<int>(width + 2)) << "hypothesis"
        << std::right << std::setw(12) << "statistic" << std::setw(12) << "quantile"
        << std::setw(12) << "p-value" << std::setw(10) << "decision" << '\n';
    for (const auto& l : result.locals) {
        out << std::left << std::setw(static_cast<int>(width + 2)) << l.label << std::right
            << std::setw(12) << l.statistic << std::setw(12) << l.critical_value << std::setw(12)
            << l.p_value << std::setw(10) << (l.reject ? "reject" : "retain") << '\n';
    }
    out << "beta_hat        " << result.beta_hat << '\n'
        << "global decision " << (result.global_reject ? "reject" : "retain") << '\n';
    return out.str();
}

}  // namespace survtest
