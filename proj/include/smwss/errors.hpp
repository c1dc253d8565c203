#pragma once

#include <stdexcept>
#include <string>

namespace smwss {

// Error categories map onto the CLI exit codes (see tools/smwss_cli.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

class UnitError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "unit"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

class InputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "input"; }
};

class AccuracyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "accuracy"; }
};

class ResourceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resource"; }
};

class MatchingError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "matching"; }
};

class ExtrapolationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "extrapolation"; }
};

class ExtractionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "extraction"; }
};

} // namespace smwss
