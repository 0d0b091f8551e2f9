#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gammalab {

enum class ErrorKind {
    InvalidInput,
    ShapeMismatch,
    NotPSD,
    NotContraction,
    NoConvergence,
    NotCommuting,
    NotNormal,
    NotPure,
    InsufficientCoefficients,
    DegreeTooLarge,
    MissingWitness,
    HypothesisViolation,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotContraction: return "NotContraction";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotPure: return "NotPure";
    case ErrorKind::InsufficientCoefficients: return "InsufficientCoefficients";
    case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorKind::MissingWitness: return "MissingWitness";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace gammalab
