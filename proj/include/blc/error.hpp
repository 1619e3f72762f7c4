#pragma once

#include <stdexcept>
#include <string>

namespace blc {

/// Raised for invalid inputs and violated preconditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An invalid distribution description; `field()` names the offending entry.
class SpecError : public Error {
public:
    SpecError(std::string field, const std::string& what)
        : Error("invalid spec: " + field + ": " + what), field_(std::move(field)), reason_(what) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

}  // namespace blc
