#include "facecue/errors.hpp"

namespace facecue {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::UnknownColumn: return "UnknownColumn";
        case Errc::DuplicateColumn: return "DuplicateColumn";
        case Errc::RaggedRow: return "RaggedRow";
        case Errc::NonNumericCell: return "NonNumericCell";
        case Errc::EmptyFile: return "EmptyFile";
        case Errc::MissingFps: return "MissingFps";
        case Errc::TooShort: return "TooShort";
        case Errc::MalformedManifest: return "MalformedManifest";
        case Errc::DuplicateSubject: return "DuplicateSubject";
        case Errc::LikertOutOfRange: return "LikertOutOfRange";
        case Errc::TooFewFrames: return "TooFewFrames";
        case Errc::WindowTooSmall: return "WindowTooSmall";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::SampleMisalignment: return "SampleMisalignment";
        case Errc::TooFewSubjects: return "TooFewSubjects";
        case Errc::FoldCoverage: return "FoldCoverage";
        case Errc::EmptyTrainingSet: return "EmptyTrainingSet";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::KTooLarge: return "KTooLarge";
        case Errc::NonFiniteLoss: return "NonFiniteLoss";
        case Errc::UnsupportedModel: return "UnsupportedModel";
        case Errc::UnknownLabel: return "UnknownLabel";
        case Errc::EmptyMatrix: return "EmptyMatrix";
        case Errc::SingleClass: return "SingleClass";
        case Errc::EmptyGrouping: return "EmptyGrouping";
        case Errc::ClassAbsent: return "ClassAbsent";
        case Errc::UnknownAttribute: return "UnknownAttribute";
        case Errc::InvalidEffectColumn: return "InvalidEffectColumn";
        case Errc::IOFailure: return "IOFailure";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::Internal: return "Internal";
    }
    return "Internal";
}

ErrorCategory errc_category(Errc code) {
    switch (code) {
        case Errc::ConfigInvalid:
        case Errc::TooFewSubjects:
        case Errc::KTooLarge:
        case Errc::UnknownAttribute:
        case Errc::UnsupportedModel:
            return ErrorCategory::Config;
        case Errc::Internal:
            return ErrorCategory::Internal;
        default:
            return ErrorCategory::Data;
    }
}

} // namespace facecue
