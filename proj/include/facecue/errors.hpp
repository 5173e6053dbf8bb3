#pragma once

#include <stdexcept>
#include <string>

namespace facecue {

enum class Errc {
    // input parsing / data
    UnknownColumn,
    DuplicateColumn,
    RaggedRow,
    NonNumericCell,
    EmptyFile,
    MissingFps,
    TooShort,
    MalformedManifest,
    DuplicateSubject,
    LikertOutOfRange,
    TooFewFrames,
    WindowTooSmall,
    LengthMismatch,
    TooFewSamples,
    SampleMisalignment,
    TooFewSubjects,
    FoldCoverage,
    EmptyTrainingSet,
    DimensionMismatch,
    KTooLarge,
    NonFiniteLoss,
    UnsupportedModel,
    UnknownLabel,
    EmptyMatrix,
    SingleClass,
    EmptyGrouping,
    ClassAbsent,
    UnknownAttribute,
    InvalidEffectColumn,
    IOFailure,
    // configuration
    ConfigInvalid,
    // everything else
    Internal,
};

enum class ErrorCategory { Config, Data, Internal };

const char* errc_name(Errc code);
ErrorCategory errc_category(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }
    ErrorCategory category() const { return errc_category(code_); }

private:
    Errc code_;
};

} // namespace facecue
