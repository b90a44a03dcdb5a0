#include "rlift/error.hpp"

namespace rlift {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonRegular: return "NonRegular";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::FibresNotPairwiseAdjacent: return "FibresNotPairwiseAdjacent";
        case ErrorCode::FibresNotDistinct: return "FibresNotDistinct";
        case ErrorCode::FibresNotAdjacent: return "FibresNotAdjacent";
        case ErrorCode::NormTooLarge: return "NormTooLarge";
        case ErrorCode::NotSignCompatible: return "NotSignCompatible";
        case ErrorCode::EmptyVector: return "EmptyVector";
        case ErrorCode::NotZVector: return "NotZVector";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::VertexNotInU: return "VertexNotInU";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidMarginals: return "InvalidMarginals";
        case ErrorCode::BadHalfSizes: return "BadHalfSizes";
        case ErrorCode::SubgraphTooLarge: return "SubgraphTooLarge";
        case ErrorCode::DenseGuard: return "DenseGuard";
        case ErrorCode::WitnessMismatch: return "WitnessMismatch";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace rlift
