#include "survtest/kernels.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "survtest/errors.hpp"

namespace survtest {

void KernelSpec::validate() const {
    if (!(length_scale_sq > 0.0)) throw SchemaError("time kernel scale must be > 0");
    if (group_kernel == GroupKernel::RationalQuadratic && (!(rq_a > 0.0) || !(rq_b > 0.0)))
        throw SchemaError("rational quadratic parameters must be > 0");
    if (!group_labels.empty()) {
        std::vector<bool> seen(group_labels.size(), false);
        for (int lab : group_labels) {
            if (lab < 1 || lab > static_cast<int>(group_labels.size()) || seen[lab - 1])
                throw SchemaError("group labels must be a permutation of 1..k");
            seen[lab - 1] = true;
        }
    }
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    if (time_kernel == TimeKernel::SquaredExponential)
        os << "se:" << length_scale_sq;
    else
        os << "ou:" << length_scale_sq;
    if (group_kernel == GroupKernel::RationalQuadratic)
        os << ",rq:" << rq_a << ":" << rq_b;
    else
        os << ",id";
    return os.str();
}

KernelSpec parse_kernel(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.empty() || parts.size() > 2) throw SchemaError("bad kernel spec: " + text);

    auto fields = [](const std::string& s) {
        std::vector<std::string> f;
        std::stringstream fs(s);
        std::string x;
        while (std::getline(fs, x, ':')) f.push_back(x);
        return f;
    };

    KernelSpec spec;
    const auto tf = fields(parts[0]);
    try {
        if (tf.size() == 2 && tf[0] == "se") {
            spec.time_kernel = TimeKernel::SquaredExponential;
            spec.length_scale_sq = std::stod(tf[1]);
        } else if (tf.size() == 2 && tf[0] == "ou") {
            spec.time_kernel = TimeKernel::OrnsteinUhlenbeck;
            spec.length_scale_sq = std::stod(tf[1]);
        } else {
            throw SchemaError("bad time kernel: " + parts[0]);
        }
        if (parts.size() == 2) {
            const auto gf = fields(parts[1]);
            if (gf.size() == 3 && gf[0] == "rq") {
                spec.group_kernel = GroupKernel::RationalQuadratic;
                spec.rq_a = std::stod(gf[1]);
                spec.rq_b = std::stod(gf[2]);
            } else if (gf.size() == 1 && gf[0] == "id") {
                spec.group_kernel = GroupKernel::Identity;
            } else {
                throw SchemaError("bad group kernel: " + parts[1]);
            }
        }
    } catch (const std::invalid_argument&) {
        throw SchemaError("bad kernel spec: " + text);
    }
    spec.validate();
    return spec;
}

double time_kernel_eval(const KernelSpec& spec, double t, double s) {
    const double d = t - s;
    if (spec.time_kernel == TimeKernel::SquaredExponential)
        return std::exp(-d * d / spec.length_scale_sq);
    return std::exp(-std::abs(d) / std::abs(spec.length_scale_sq));
}

Eigen::MatrixXd group_kernel_matrix(const KernelSpec& spec, int k) {
    if (k < 2) throw SchemaError("group kernel needs k >= 2");
    if (!spec.group_labels.empty() && static_cast<int>(spec.group_labels.size()) != k)
        throw SchemaError("group label vector length does not match k");
    if (spec.group_kernel == GroupKernel::Identity) return Eigen::MatrixXd::Identity(k, k);
    auto label = [&](int g) { return spec.group_labels.empty() ? g + 1 : spec.group_labels[g]; };
    Eigen::MatrixXd J(k, k);
    const double denom = 2.0 * spec.rq_a * spec.rq_b * spec.rq_b;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double d = static_cast<double>(label(i) - label(j));
            J(i, j) = std::pow(1.0 + d * d / denom, -spec.rq_a);
        }
    }
    return J;
}

Eigen::VectorXd rescale(const Eigen::VectorXd& times) {
    const double mx = times.maxCoeff();
    if (!(mx > 0.0)) throw SchemaError("cannot rescale: max time is not positive");
    return times / mx;
}

}  // namespace survtest
