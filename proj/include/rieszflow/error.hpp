#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rieszflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A quadrature sample was NaN or infinite.
class NonFiniteSample : public Error {
public:
    NonFiniteSample(std::size_t node_index, double x)
        : Error("non-finite sample at quadrature node " + std::to_string(node_index) +
                " (x = " + std::to_string(x) + ")"),
          node_index_(node_index) {}

    [[nodiscard]] std::size_t node_index() const noexcept { return node_index_; }

private:
    std::size_t node_index_;
};

/// Fixed-point inversion of a residual block did not settle.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// The optimizer produced a non-finite objective.
class Divergence : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Requested a feature outside the implemented scope (e.g. dimension > 1).
class Unsupported : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace rieszflow
