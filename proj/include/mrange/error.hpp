#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrange {

enum class ErrorKind {
    NonSquare,
    NotHermitian,
    NotPSD,
    BadShape,
    ShapeMismatch,
    NotCP,
    NotUnital,
    InconsistentAffine,
    NotPartitionOfIdentity,
    RadiusTooLarge,
    RangeViolation,
    NoConvergence,
    NotContraction,
    WindowTooSmall,
    ConditionFails,
    SolverUndetermined,
    NotStrictlyPositive,
    RootPairingFailed,
    MomentResidualTooLarge,
    BoundaryBand,
    BadArgument,
    BadJson,
    UnknownCommand,
};

std::string_view error_name(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind; the
// CLI reports error_name(kind) verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

}  // namespace mrange
