#pragma once

#include <string>
#include <vector>

#include "survtest/bootstrap.hpp"
#include "survtest/contrasts.hpp"
#include "survtest/engine.hpp"
#include "survtest/multiple.hpp"

namespace survtest {

inline constexpr const char* kVersion = "0.1.0";

struct Dataset {
    SurvivalSample sample;
    FactorialDesign design;
    std::vector<int> group_counts;  // per group 1..k
};

/// Read a delimited text file with header. Factor columns must hold integer
/// levels 1..L without gaps; groups are formed lexicographically over the
/// factor columns. Throws SchemaError with a row number on violations.
Dataset load_dataset(const std::string& path, const std::string& time_col = "time",
                     const std::string& status_col = "status",
                     const std::vector<std::string>& factor_cols = {"group"});

/// Write a sample in the same schema load_dataset reads.
void write_dataset(const std::string& path, const SurvivalSample& sample,
                   const FactorialDesign& design);

/// JSON result document: test output plus the full configuration echo needed
/// to reproduce it bit-for-bit.
std::string result_document(const TestResult& result, const KernelSpec& spec,
                            const std::string& hypothesis_label);
std::string result_document(const MCTestResult& result, const KernelSpec& spec);

/// Aligned text table for humans.
std::string result_table(const TestResult& result, const std::string& hypothesis_label);
std::string result_table(const MCTestResult& result);

}  // namespace survtest
