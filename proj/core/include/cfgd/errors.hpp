#ifndef CFGD_ERRORS_HPP
#define CFGD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfgd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Cholesky-style factorization hit a non-positive pivot.
class NotSpd : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

// Gamma function evaluated at a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Coordinate-restricted derivative queried with a stale or absent cache.
class CacheMissing : public Error {
public:
    using Error::Error;
};

// d'Ad is numerically null; the direction signals convergence.
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

class NonFiniteIterate : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace cfgd

#endif
