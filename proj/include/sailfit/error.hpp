#pragma once

#include <stdexcept>
#include <string>

namespace sailfit {

// Error kinds named after the failure they report. The CLI maps each kind
// to a process exit code (see exit_code_for).
enum class Err {
    FileNotFound,
    IoError,
    HeaderMismatch,
    EmptyAfterCleaning,
    EmptyInput,
    LengthMismatch,
    DimensionMismatch,
    SchemaMismatch,
    MissingColumn,
    ZeroVarianceColumn,
    ZeroVariance,
    UnknownRegion,
    RankDeficient,
    Diverged,
    NonFiniteGradient,
    NonFiniteLoss,
    NonFiniteData,
    TooFewRows,
    SingleRegion,
    InvalidArgument,
    Usage,
};

const char* err_name(Err kind);

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}

    Err kind() const { return kind_; }

private:
    Err kind_;
};

// Exit codes: 0 success, 1 I/O, 2 empty/degenerate data, 64 usage, 70 numerical.
int exit_code_for(Err kind);

} // namespace sailfit
