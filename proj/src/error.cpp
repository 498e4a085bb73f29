#include "ssg/error.hpp"

namespace ssg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_positive: return "NonPositive";
    case ErrorCode::rho_negative: return "RhoNegative";
    case ErrorCode::insufficient_sequence: return "InsufficientSequence";
    case ErrorCode::limit_out_of_range: return "LimitOutOfRange";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::gamma_zero: return "GammaZero";
    case ErrorCode::word_too_long: return "WordTooLong";
    case ErrorCode::midline_node_missing: return "MidlineNodeMissing";
    case ErrorCode::topology_mismatch: return "TopologyMismatch";
    case ErrorCode::all_vertices_removed: return "AllVerticesRemoved";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::non_positive_mass: return "NonPositiveMass";
    case ErrorCode::zero_vector: return "ZeroVector";
    case ErrorCode::out_of_regime: return "OutOfRegime";
    case ErrorCode::empty_window: return "EmptyWindow";
    case ErrorCode::too_few_points: return "TooFewPoints";
    case ErrorCode::wrong_regime: return "WrongRegime";
    case ErrorCode::nonvanishing_boundary: return "NonvanishingBoundary";
    case ErrorCode::cell_mismatch: return "CellMismatch";
    case ErrorCode::slice_unavailable: return "SliceUnavailable";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace ssg
