#pragma once

#include <stdexcept>
#include <string>

namespace survtest {

// Malformed input file or flag combination. CLI exit code 2.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Sample cannot support a test (e.g. no observed events). CLI exit code 3.
struct DegenerateDataError : std::runtime_error {
    explicit DegenerateDataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace survtest
