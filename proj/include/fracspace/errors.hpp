#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fracspace {

// Base error carrying a machine-readable kind tag. The CLI maps kinds to
// exit codes: validation-type kinds exit 1, numerical-failure kinds exit 2.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct MalformedInputError : Error {
    explicit MalformedInputError(const std::string& w) : Error("malformed-input", w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("domain", w) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& w) : Error("format", w) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error("precondition", w) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error("config", w) {}
};

struct GenerationError : Error {
    explicit GenerationError(const std::string& w) : Error("generation", w) {}
};

struct DegenerateInputError : Error {
    explicit DegenerateInputError(const std::string& w) : Error("degenerate-input", w) {}
};

struct UnsupportedOperatorError : Error {
    explicit UnsupportedOperatorError(const std::string& w) : Error("unsupported-operator", w) {}
};

// Numerical failures (divergent flows, escalated truncation warnings).
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error("numerical", w) {}
};

struct TruncationError : Error {
    explicit TruncationError(const std::string& w) : Error("truncation", w) {}
};

inline bool is_numerical_failure(const Error& e) {
    return e.kind() == "numerical" || e.kind() == "truncation";
}

} // namespace fracspace
