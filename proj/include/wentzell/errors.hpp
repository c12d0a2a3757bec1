#pragma once

#include <stdexcept>
#include <string>

namespace wentzell {

/// Invalid user-supplied parameter (exponent out of range, bad mesh sizes, ...).
class ParameterError : public std::runtime_error {
 public:
  explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed mesh file; message carries the offending line number.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Mesh violates a structural invariant; message lists the diagnostics.
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear algebra failure (factorization breakdown, indefinite operator, ...).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// An iteration exhausted its budget without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wentzell
