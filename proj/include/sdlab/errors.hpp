#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rejected polygon input. vertex() is the offending input index, or -1.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, long vertex = -1) : Error(what), vertex_(vertex) {}
    long vertex() const noexcept { return vertex_; }

private:
    long vertex_;
};

// delta lies outside the range where the requested construction or closed form is valid.
// max_delta() is the supremum of admissible measures.
class RegimeError : public Error {
public:
    RegimeError(const std::string& what, double max_delta) : Error(what), max_delta_(max_delta) {}
    double max_delta() const noexcept { return max_delta_; }

private:
    double max_delta_;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

// A proved inequality failed numerically; always an artifact bug.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace sdlab
