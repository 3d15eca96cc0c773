#pragma once

#include <stdexcept>
#include <string>

namespace gethlab {

/// Bad user input or configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required input table or cache entry is absent (CLI exit code 3).
class MissingPrerequisite : public std::runtime_error {
public:
    MissingPrerequisite(const std::string& what, std::string command)
        : std::runtime_error(what), command_(std::move(command)) {}
    const std::string& command() const { return command_; }

private:
    std::string command_;
};

/// Solver failure, step-size underflow, sampling starvation (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gethlab
