#pragma once

#include <stdexcept>
#include <string>

namespace rrfsi {

/// Invalid geometry (degenerate elements, non-adjacent domains, ...).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or configuration value; the message names the offender.
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Incompatible spaces/meshes handed to an assembly routine.
struct AssemblyError : std::runtime_error {
    explicit AssemblyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linear solver failure (singular matrix, factorization breakdown).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File output failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rrfsi
