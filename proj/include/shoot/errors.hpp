#pragma once

#include <stdexcept>
#include <string>

namespace shoot {

// Bad problem data, structure/bounds mismatch, missing derivatives, ...
class ConfigurationError : public std::runtime_error {
public:
    explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

// The coefficient of the control in the second derivative of the switching
// function is singular: the singular control cannot be recovered at this point.
class LegendreClebschViolation : public std::runtime_error {
public:
    LegendreClebschViolation(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number(condition_number) {}
    double condition_number;
};

// State or costate became non-finite while integrating.
class IntegrationDiverged : public std::runtime_error {
public:
    IntegrationDiverged(const std::string& what, double time)
        : std::runtime_error(what), time(time) {}
    double time;
};

// Normal-equations matrix of the least-squares step is numerically singular.
class JacobianRankDeficient : public std::runtime_error {
public:
    JacobianRankDeficient(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number(condition_number) {}
    double condition_number;
};

// Square Newton system with a numerically singular Jacobian.
class JacobianSingular : public std::runtime_error {
public:
    explicit JacobianSingular(const std::string& what) : std::runtime_error(what) {}
};

// Residual evaluation failed at a finite-difference probe.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, int coordinate)
        : std::runtime_error(what), coordinate(coordinate) {}
    int coordinate;
};

// Classical reduction did not produce a square system.
class NotSquare : public std::runtime_error {
public:
    explicit NotSquare(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shoot
