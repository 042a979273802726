#pragma once

#include <stdexcept>
#include <string>

namespace edbsw {

// Input/decode failures (unreadable file, bad magic, truncated stream).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or unusable grid dimensions.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Non-finite or otherwise out-of-domain scalar arguments.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Frequency-response denominator collapsed below the safe magnitude.
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& msg, double omega)
        : std::runtime_error(msg + " at omega=" + std::to_string(omega)), omega_(omega) {}
    double omega() const { return omega_; }

private:
    double omega_;
};

// Filter bank failed its biorthogonality screen or could not be built.
class FilterConstructionError : public std::runtime_error {
public:
    FilterConstructionError(const std::string& msg, double deviation)
        : std::runtime_error(msg), deviation_(deviation) {}
    double deviation() const { return deviation_; }

private:
    double deviation_;
};

// Unknown bank / operator / enum name.
class LookupError : public std::invalid_argument {
public:
    explicit LookupError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Iterative operator hit its cap without reaching a fixed point.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : std::runtime_error(msg + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Invalid user-facing parameter (alpha out of range, bad thresholds, ...).
class ParamError : public std::invalid_argument {
public:
    explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Wraps any stage failure inside the detection pipeline with the stage name.
class PipelineError : public std::runtime_error {
public:
    PipelineError(const std::string& stage, const std::string& msg)
        : std::runtime_error("[" + stage + "] " + msg), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace edbsw
