#pragma once

#include <stdexcept>
#include <string>

namespace ks {

// invalid user input: bad scenario file, inconsistent bounds, malformed mesh
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// linear solver breakdown or divergence
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// evaluation outside the supported region (e.g. field requested at a source)
struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ks
