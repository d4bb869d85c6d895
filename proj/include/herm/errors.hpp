#pragma once

#include <stdexcept>
#include <string>

namespace herm {

// Argument outside the mathematical domain of an operation (e.g. Laguerre
// type parameter alpha <= -1, or a radial basis requested in dimension 1).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation would exceed the configured size limits
// (bucket too large, tensor mode count too high, panel budget exhausted).
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A numerical search could not certify a result (lower-bound region search).
class SearchFailed : public std::runtime_error {
public:
    explicit SearchFailed(const std::string& what) : std::runtime_error(what) {}
};

// Modulus-of-continuity step below the resolution of the sample grid.
class HTooSmall : public std::runtime_error {
public:
    explicit HTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// Log-log fit impossible (fewer than the minimum points, or all abscissae equal).
class Degenerate : public std::runtime_error {
public:
    explicit Degenerate(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment configuration (unknown key, unparsable value, invalid range).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Report file could not be written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace herm
