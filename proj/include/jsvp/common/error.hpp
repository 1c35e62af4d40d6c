#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jsvp {

// Every failure the library throws carries one of these codes. The CLI maps
// the code's category onto a process exit status.
enum class ErrorCode {
  Usage,
  Io,
  Config,
  Parse,
  RepoNotFound,
  CommitNotFound,
  UnreadableBlob,
  OutOfOrderCommit,
  DuplicateKey,
  MissingFeature,
  InsufficientClassSamples,
  RatioUnreachable,
  NonFiniteFeature,
  EmptyClass,
  FeatureManifestMismatch,
  LengthMismatch,
  Model,
};

enum class ErrorCategory { Usage, Io, Config, Data, Repository, Model };

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::RepoNotFound: return "RepoNotFound";
    case ErrorCode::CommitNotFound: return "CommitNotFound";
    case ErrorCode::UnreadableBlob: return "UnreadableBlob";
    case ErrorCode::OutOfOrderCommit: return "OutOfOrderCommit";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::InsufficientClassSamples: return "InsufficientClassSamples";
    case ErrorCode::RatioUnreachable: return "RatioUnreachable";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::FeatureManifestMismatch: return "FeatureManifestMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Model: return "ModelError";
  }
  return "Unknown";
}

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return ErrorCategory::Usage;
    case ErrorCode::Io:
    case ErrorCode::UnreadableBlob: return ErrorCategory::Io;
    case ErrorCode::Config: return ErrorCategory::Config;
    case ErrorCode::RepoNotFound:
    case ErrorCode::CommitNotFound:
    case ErrorCode::OutOfOrderCommit: return ErrorCategory::Repository;
    case ErrorCode::Model:
    case ErrorCode::EmptyClass:
    case ErrorCode::FeatureManifestMismatch: return ErrorCategory::Model;
    default: return ErrorCategory::Data;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace jsvp
