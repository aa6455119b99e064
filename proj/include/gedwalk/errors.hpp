#pragma once

#include <stdexcept>
#include <string>

namespace gedwalk {

/// Problem with input data: unreadable or malformed files, invalid edge
/// weights, graphs that do not satisfy an operation's structural
/// preconditions (e.g. normalizing a directed graph).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string &what) : std::runtime_error(what) {}
};

/// Numeric failure: divergent parameterization (alpha at or beyond the
/// convergence limit), non-finite accumulation, or a level cap hit that
/// signals an inconsistent tail bound.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace gedwalk
