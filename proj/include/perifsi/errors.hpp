#pragma once

#include <stdexcept>
#include <string>

namespace perifsi {

// Base of every error raised by the library. kind() is the stable
// machine-readable tag printed by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PERIFSI_ERROR(Name)                                                    \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

PERIFSI_ERROR(DomainViolation);
PERIFSI_ERROR(IndexOutOfRange);
PERIFSI_ERROR(BasisMismatch);
PERIFSI_ERROR(RadiusOutOfRange);
PERIFSI_ERROR(NotMeanZero);
PERIFSI_ERROR(UnsupportedSource);
PERIFSI_ERROR(EigenFailure);
PERIFSI_ERROR(GridMismatch);
PERIFSI_ERROR(LinearSolveFailure);
PERIFSI_ERROR(SingularMonodromy);
PERIFSI_ERROR(NoConvergence);
PERIFSI_ERROR(ZeroForcing);
PERIFSI_ERROR(ValidationError);

#undef PERIFSI_ERROR

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("ParseError", "line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Raised by the IVP driver internals; carries the last time that was reached
// with an admissible geometry.
class DomainViolationAt : public DomainViolation {
public:
    DomainViolationAt(double t, const std::string& what)
        : DomainViolation(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

}  // namespace perifsi
