#include "sailfit/error.hpp"

namespace sailfit {

const char* err_name(Err kind) {
    switch (kind) {
        case Err::FileNotFound: return "FileNotFound";
        case Err::IoError: return "IoError";
        case Err::HeaderMismatch: return "HeaderMismatch";
        case Err::EmptyAfterCleaning: return "EmptyAfterCleaning";
        case Err::EmptyInput: return "EmptyInput";
        case Err::LengthMismatch: return "LengthMismatch";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::SchemaMismatch: return "SchemaMismatch";
        case Err::MissingColumn: return "MissingColumn";
        case Err::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case Err::ZeroVariance: return "ZeroVariance";
        case Err::UnknownRegion: return "UnknownRegion";
        case Err::RankDeficient: return "RankDeficient";
        case Err::Diverged: return "Diverged";
        case Err::NonFiniteGradient: return "NonFiniteGradient";
        case Err::NonFiniteLoss: return "NonFiniteLoss";
        case Err::NonFiniteData: return "NonFiniteData";
        case Err::TooFewRows: return "TooFewRows";
        case Err::SingleRegion: return "SingleRegion";
        case Err::InvalidArgument: return "InvalidArgument";
        case Err::Usage: return "Usage";
    }
    return "Unknown";
}

int exit_code_for(Err kind) {
    switch (kind) {
        case Err::FileNotFound:
        case Err::IoError:
            return 1;
        case Err::EmptyAfterCleaning:
        case Err::EmptyInput:
        case Err::TooFewRows:
        case Err::SingleRegion:
        case Err::ZeroVariance:
        case Err::ZeroVarianceColumn:
            return 2;
        case Err::Usage:
            return 64;
        default:
            return 70;
    }
}

} // namespace sailfit
