#pragma once

#include <stdexcept>
#include <string>

namespace expanse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A domain object or argument violates its contract. `field()` names the
/// offending input when one can be identified.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what, std::string field = {})
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace expanse
