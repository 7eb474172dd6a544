#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swissfair {

// Base for every error the library raises. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input parameters or configuration (exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent data files (exit code 4).
class DataError : public Error {
public:
    using Error::Error;
};

// Degenerate regression problems: rank deficiency, separation, single class.
class StatsError : public Error {
public:
    using Error::Error;
};

// No legal pairing exists for the remaining players (exit code 3).
class InfeasiblePairingError : public Error {
public:
    InfeasiblePairingError(const std::string& what, std::vector<int> unmatched)
        : Error(what), unmatched_(std::move(unmatched)) {}

    const std::vector<int>& unmatched() const noexcept { return unmatched_; }

private:
    std::vector<int> unmatched_;
};

}  // namespace swissfair
