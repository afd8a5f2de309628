#pragma once

#include <stdexcept>
#include <string>

namespace postsel {

enum class Errc {
    DegenerateState,
    SpaceMismatch,
    PostselectionSingular,
    IncompleteDecomposition,
    InvalidTransmission,
    UnsupportedShape,
    StrengthZero,
    InvalidStrength,
    InsufficientData,
    SumRuleViolation,
    DegenerateTargets,
    InvalidProbability,
    InvalidVisibility,
    NotFound,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DegenerateState:         return "DegenerateState";
        case Errc::SpaceMismatch:           return "SpaceMismatch";
        case Errc::PostselectionSingular:   return "PostselectionSingular";
        case Errc::IncompleteDecomposition: return "IncompleteDecomposition";
        case Errc::InvalidTransmission:     return "InvalidTransmission";
        case Errc::UnsupportedShape:        return "UnsupportedShape";
        case Errc::StrengthZero:            return "StrengthZero";
        case Errc::InvalidStrength:         return "InvalidStrength";
        case Errc::InsufficientData:        return "InsufficientData";
        case Errc::SumRuleViolation:        return "SumRuleViolation";
        case Errc::DegenerateTargets:       return "DegenerateTargets";
        case Errc::InvalidProbability:      return "InvalidProbability";
        case Errc::InvalidVisibility:       return "InvalidVisibility";
        case Errc::NotFound:                return "NotFound";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace postsel
