#pragma once

#include <stdexcept>
#include <string>

namespace infopt {

enum class ErrorKind {
    OutOfRange,
    StepCountTooSmall,
    DegenerateStart,
    GridTooCoarse,
    UnstableConfiguration,
    OutOfDomain,
    EmptySample,
    ParseError,
    ValidationError,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so front-ends can map
// it to an exit code without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// OutOfRange carries the offending field so callers (scenario parser, tests)
// can report it.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(std::string field, const std::string& bound)
        : Error(ErrorKind::OutOfRange, field + " violates " + bound), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace infopt
