#pragma once

#include <stdexcept>
#include <string>

namespace epflow {

/// Invalid input parameter. `field()` names the offending parameter path (e.g. "scenario.c1").
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A computation produced or consumed non-finite values, or a linear solve broke down.
class NumericalFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Blowup-time extrapolation could not be fitted to the supplied samples.
class FitFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructed initial datum failed the hypotheses it was built to satisfy.
class ConstructionFailure : public std::runtime_error {
public:
    ConstructionFailure(const std::string& what, double radius = -1.0)
        : std::runtime_error(what), radius_(radius) {}

    /// Offending radius, or negative when not applicable.
    double radius() const { return radius_; }

private:
    double radius_;
};

/// A time series violated a monotonicity requirement beyond tolerance.
class MonotonicityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace epflow
