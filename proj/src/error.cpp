#include "afembed/error.hpp"

namespace afembed {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::InvalidDimension: return "INVALID_DIMENSION";
    case ErrorCode::InvalidMatrix: return "INVALID_MATRIX";
    case ErrorCode::InvalidChain: return "INVALID_CHAIN";
    case ErrorCode::InvalidSequence: return "INVALID_SEQUENCE";
    case ErrorCode::NotAUhfChain: return "NOT_A_UHF_CHAIN";
    case ErrorCode::NotAMorphism: return "NOT_A_MORPHISM";
    case ErrorCode::NotHermitian: return "NOT_HERMITIAN";
    case ErrorCode::NotUnitary: return "NOT_UNITARY";
    case ErrorCode::EmptyFamily: return "EMPTY_FAMILY";
    case ErrorCode::ScaleLimit: return "SCALE_LIMIT";
    case ErrorCode::NotCp: return "NOT_CP";
    case ErrorCode::DefectTooLarge: return "DEFECT_TOO_LARGE";
    case ErrorCode::SpectrumInGap: return "SPECTRUM_IN_GAP";
    case ErrorCode::NotNearContraction: return "NOT_NEAR_CONTRACTION";
    case ErrorCode::InconsistentDimensions: return "INCONSISTENT_DIMENSIONS";
    case ErrorCode::NotInvertibleUnitImage: return "NOT_INVERTIBLE_UNIT_IMAGE";
    case ErrorCode::NonConvergent: return "NON_CONVERGENT";
    case ErrorCode::NeverAdmissible: return "NEVER_ADMISSIBLE";
    case ErrorCode::DegenerateSubspace: return "DEGENERATE_SUBSPACE";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

int error_exit_class(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidDimension:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::InvalidChain:
    case ErrorCode::InvalidSequence:
    case ErrorCode::NotAUhfChain:
    case ErrorCode::NotAMorphism:
    case ErrorCode::NotHermitian:
    case ErrorCode::NotUnitary:
    case ErrorCode::EmptyFamily:
    case ErrorCode::ScaleLimit:
      return 2;
    case ErrorCode::NotCp:
      return 3;
    default:
      return 4;
  }
}

}  // namespace afembed
