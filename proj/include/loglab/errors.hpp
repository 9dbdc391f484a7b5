#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace loglab {

// Raised when a constructor or configuration rejects an input value.
// `field` names the offending input so the CLI can report it precisely.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A structurally wrong call, e.g. a control rate supplied for a harvest
// mode that does not take one.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A non-finite value appeared during numerical work; `at_time` is the
// integration time at which it was produced.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& message, double t)
        : std::runtime_error(message), t_(t) {}

    double at_time() const noexcept { return t_; }

private:
    double t_;
};

} // namespace loglab
