#pragma once

#include <stdexcept>
#include <string>

namespace gasfl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad n/f, mismatched dims, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input data is not acceptable, e.g. NaN entries at server ingress.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A configuration file or descriptor failed validation. `field` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

namespace detail {
[[noreturn]] inline void fail_precondition(const std::string& what) { throw PreconditionError(what); }

inline void require(bool condition, const std::string& what) {
    if (!condition) fail_precondition(what);
}
}  // namespace detail

}  // namespace gasfl
