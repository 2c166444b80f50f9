#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wiltscan {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptData,
  IoError,
  InvalidColorspace,
  InvalidArgument,
  DimensionMismatch,
  OutOfBounds,
  EmptyInput,
  KExceedsSamples,
  InfeasibleSpec,
  EmptyDirectory,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by run_pipeline; names the stage that failed and keeps the original code.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), "stage '" + stage + "': " + cause.what()),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace wiltscan
