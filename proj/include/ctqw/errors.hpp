#pragma once

#include <stdexcept>
#include <string>

namespace ctqw {

/// Bad arguments supplied by the caller: sizes, indices, malformed requests.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Input data that fails validation: parse errors, disconnected graphs,
/// non-Hermitian matrix files, inequitable cell lists.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: non-convergence, probability excursions.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ctqw
