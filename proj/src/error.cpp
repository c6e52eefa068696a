// SPDX-License-Identifier: Apache-2.0
#include "palinverse/error.hpp"

namespace palinverse {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularMatrix: return "singular matrix";
        case ErrorCode::ConvergenceFailure: return "convergence failure";
        case ErrorCode::DimensionMismatch: return "dimension mismatch";
        case ErrorCode::ZeroLambda: return "zero lambda";
        case ErrorCode::NotHermitian: return "not hermitian";
        case ErrorCode::SymmetryViolation: return "symmetry violation";
        case ErrorCode::FactorizationFailure: return "factorization failure";
        case ErrorCode::BadIndices: return "bad indices";
        case ErrorCode::NoNonsingularFound: return "no nonsingular found";
        case ErrorCode::Inconsistent: return "inconsistent";
        case ErrorCode::SingularW: return "singular W";
        case ErrorCode::ResidualTooLarge: return "residual too large";
        case ErrorCode::SingularLeadingBlock: return "singular leading block";
        case ErrorCode::MembershipViolation: return "membership violation";
        case ErrorCode::PairingFailure: return "pairing failure";
        case ErrorCode::TargetNotFound: return "target not found";
        case ErrorCode::PairingNotClosed: return "pairing not closed";
        case ErrorCode::SpectraOverlap: return "spectra overlap";
        case ErrorCode::NoSolution: return "no solution";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::RetryExhausted: return "retry exhausted";
        case ErrorCode::NonsingularityRetryExhausted: return "nonsingularity retry exhausted";
        case ErrorCode::RemainingEigenvalueConflict: return "remaining eigenvalue conflict";
        case ErrorCode::SingularS1Precursor: return "singular S1 precursor";
        case ErrorCode::XiSingularRetryExhausted: return "xi singular retry exhausted";
        case ErrorCode::NoNonsingularS1tilde: return "no nonsingular S1tilde";
        case ErrorCode::StructureViolation: return "structure violation";
        case ErrorCode::SingularInput: return "singular input";
        case ErrorCode::NotJBDiagonalizable: return "not jointly block diagonalizable";
        case ErrorCode::GeomMultViolation: return "geometric multiplicity violation";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::NonFinite: return "non-finite entry";
        case ErrorCode::Parse: return "parse";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(error_name(code))
                                        : std::string(error_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace palinverse
