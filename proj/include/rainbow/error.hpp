#pragma once

#include <stdexcept>
#include <string>

namespace rainbow {

enum class ErrorKind {
    DuplicateEdge,
    IndexOutOfRange,
    InvalidInput,
    GenerationFailed,
    NotInMatching,
    InvalidMove,
    NoPerfectMatching,
    TooLargeForExact,
    NotDirac,
    RefinementFailed,
    PoolExhausted,
    RetriesExhausted,
    NotEnoughColors,
    OddDelta,
    NotProperColoring,
    VerificationFailed,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::GenerationFailed: return "GenerationFailed";
        case ErrorKind::NotInMatching: return "NotInMatching";
        case ErrorKind::InvalidMove: return "InvalidMove";
        case ErrorKind::NoPerfectMatching: return "NoPerfectMatching";
        case ErrorKind::TooLargeForExact: return "TooLargeForExact";
        case ErrorKind::NotDirac: return "NotDirac";
        case ErrorKind::RefinementFailed: return "RefinementFailed";
        case ErrorKind::PoolExhausted: return "PoolExhausted";
        case ErrorKind::RetriesExhausted: return "RetriesExhausted";
        case ErrorKind::NotEnoughColors: return "NotEnoughColors";
        case ErrorKind::OddDelta: return "OddDelta";
        case ErrorKind::NotProperColoring: return "NotProperColoring";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace rainbow
