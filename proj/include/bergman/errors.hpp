#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

enum class ErrorKind {
    InvalidParameter,
    MapInversionFailure,
    QuadratureError,
    PrecisionExhausted,
    LaurentTail,
    FaberInconsistency,
    NearBoundary,
    ContourDegenerate,
    ClassificationFailure,
    NearBoundaryInconclusive,
    NotInOmegaStar,
    DomainError,
    ScalingError,
    RootFailure,
    InteriorMapUnavailable,
    DegreeOutOfRange,
    ConfigError,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace bergman
