#pragma once

#include <stdexcept>
#include <string>

namespace rlift {

enum class ErrorCode {
    NonRegular,
    SelfLoop,
    DuplicateEdge,
    VertexOutOfRange,
    InvalidArgument,
    DimensionMismatch,
    TooLarge,
    FibresNotPairwiseAdjacent,
    FibresNotDistinct,
    FibresNotAdjacent,
    NormTooLarge,
    NotSignCompatible,
    EmptyVector,
    NotZVector,
    DomainError,
    VertexNotInU,
    EmptyInput,
    InvalidMarginals,
    BadHalfSizes,
    SubgraphTooLarge,
    DenseGuard,
    WitnessMismatch,
    ParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rlift
