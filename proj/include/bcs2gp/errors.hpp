#pragma once

#include <stdexcept>
#include <string>

namespace bcs2gp {

// Numerical failures map to CLI exit code 3, config problems to 2, I/O to 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoBoundState : NumericalError {
    explicit NoBoundState(const std::string& m) : NumericalError("NoBoundState: " + m) {}
};
struct NotConverged : NumericalError {
    explicit NotConverged(const std::string& m) : NumericalError("NotConverged: " + m) {}
};
struct InvalidGrid : NumericalError {
    explicit InvalidGrid(const std::string& m) : NumericalError("InvalidGrid: " + m) {}
};
struct QuadratureFailure : NumericalError {
    explicit QuadratureFailure(const std::string& m) : NumericalError("QuadratureFailure: " + m) {}
};
struct InvalidParameter : NumericalError {
    explicit InvalidParameter(const std::string& m) : NumericalError("InvalidParameter: " + m) {}
};
struct CutoffMismatch : NumericalError {
    explicit CutoffMismatch(const std::string& m) : NumericalError("CutoffMismatch: " + m) {}
};
struct GapClosed : NumericalError {
    explicit GapClosed(const std::string& m) : NumericalError("GapClosed: " + m) {}
};
struct AdmissibilityViolation : NumericalError {
    explicit AdmissibilityViolation(const std::string& m)
        : NumericalError("AdmissibilityViolation: " + m) {}
};
struct WindowTooSmall : NumericalError {
    explicit WindowTooSmall(const std::string& m) : NumericalError("WindowTooSmall: " + m) {}
};
struct ZeroDensity : NumericalError {
    explicit ZeroDensity(const std::string& m) : NumericalError("ZeroDensity: " + m) {}
};

struct ConfigParseError : std::runtime_error {
    explicit ConfigParseError(const std::string& m)
        : std::runtime_error("ConfigParseError: " + m) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error("IoError: " + m) {}
};
struct EmptyBundle : std::runtime_error {
    explicit EmptyBundle(const std::string& m) : std::runtime_error("EmptyBundle: " + m) {}
};

}  // namespace bcs2gp
