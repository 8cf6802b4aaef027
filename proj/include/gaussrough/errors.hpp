#pragma once

#include <stdexcept>
#include <string>

namespace gaussrough {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfDomainError : Error {
    explicit OutOfDomainError(const std::string& what) : Error(what) {}
};

struct TailNotControlledError : Error {
    explicit TailNotControlledError(const std::string& what) : Error(what) {}
};

struct NotPsdError : Error {
    explicit NotPsdError(const std::string& what) : Error(what) {}
};

struct BadExponentError : Error {
    explicit BadExponentError(const std::string& what) : Error(what) {}
};

struct TooLargeForExactError : Error {
    explicit TooLargeForExactError(const std::string& what) : Error(what) {}
};

struct DegenerateFitError : Error {
    explicit DegenerateFitError(const std::string& what) : Error(what) {}
};

struct QuadratureError : Error {
    explicit QuadratureError(const std::string& what) : Error(what) {}
};

struct DivergesError : Error {
    explicit DivergesError(const std::string& what) : Error(what) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& what) : Error(what) {}
};

struct NotStationaryError : Error {
    explicit NotStationaryError(const std::string& what) : Error(what) {}
};

struct UnknownKindError : Error {
    explicit UnknownKindError(const std::string& what) : Error(what) {}
};

struct McNoiseError : Error {
    explicit McNoiseError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace gaussrough
