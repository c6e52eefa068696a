// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace palinverse {

enum class ErrorCode {
    SingularMatrix,
    ConvergenceFailure,
    DimensionMismatch,
    ZeroLambda,
    NotHermitian,
    SymmetryViolation,
    FactorizationFailure,
    BadIndices,
    NoNonsingularFound,
    Inconsistent,
    SingularW,
    ResidualTooLarge,
    SingularLeadingBlock,
    MembershipViolation,
    PairingFailure,
    TargetNotFound,
    PairingNotClosed,
    SpectraOverlap,
    NoSolution,
    Infeasible,
    RetryExhausted,
    NonsingularityRetryExhausted,
    RemainingEigenvalueConflict,
    SingularS1Precursor,
    XiSingularRetryExhausted,
    NoNonsingularS1tilde,
    StructureViolation,
    SingularInput,
    NotJBDiagonalizable,
    GeomMultViolation,
    InvalidArgument,
    NonFinite,
    Parse,
};

// Short machine-readable name, e.g. "target not found".
const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);
    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace palinverse
