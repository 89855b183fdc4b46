#pragma once

#include <stdexcept>
#include <string>

namespace sdelab {

/// Base class for all library errors. `kind()` names the failure category.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept = 0;
};

#define SDELAB_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(what) {}            \
        const char* kind() const noexcept override { return #Name; }       \
    };

/// A moment or sum that is not finite (e.g. a Pareto moment at or above the shape).
SDELAB_DEFINE_ERROR(NonFinite)
SDELAB_DEFINE_ERROR(DivisionByZero)
/// No positive root of E(1+xi)^alpha = 1.
SDELAB_DEFINE_ERROR(NoRoot)
SDELAB_DEFINE_ERROR(NotIID)
SDELAB_DEFINE_ERROR(Unsupported)
/// Iterate exceeded the overflow cap.
SDELAB_DEFINE_ERROR(Overflow)
SDELAB_DEFINE_ERROR(InvalidArgument)
SDELAB_DEFINE_ERROR(PreconditionFailed)

#undef SDELAB_DEFINE_ERROR

/// Configuration error carrying the offending field path and source line (0 if unknown).
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message, int line = 0)
        : Error(format(field, message, line)), field_(std::move(field)), line_(line) {}

    const char* kind() const noexcept override { return "ConfigError"; }
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& field, const std::string& message, int line) {
        std::string out = field + ": " + message;
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        return out;
    }

    std::string field_;
    int line_;
};

}  // namespace sdelab
