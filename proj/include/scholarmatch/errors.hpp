#pragma once

#include <stdexcept>
#include <string>

namespace scholarmatch {

// Exit codes used by the CLI. Library code throws the typed errors below;
// the CLI maps them onto these codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitInputError = 3,
  kExitStageError = 4,
  kExitOracleMismatch = 5,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input-side problems (missing files, bad headers, dirty rows past the
// tolerated fraction, unusable DOIs).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileMissing : InputError {
  explicit FileMissing(const std::string& path) : InputError("file missing: " + path) {}
};

struct FormatError : InputError {
  using InputError::InputError;
};

struct ExcessiveMalformedRows : InputError {
  using InputError::InputError;
};

struct InvalidDoi : InputError {
  explicit InvalidDoi(const std::string& raw) : InputError("invalid DOI: " + raw) {}
};

struct EmptyName : std::runtime_error {
  explicit EmptyName(const std::string& raw) : std::runtime_error("name has no usable tokens: " + raw) {}
};

struct InvalidParams : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("stage '" + stage + "' failed: " + what), stage_name(stage) {}
  std::string stage_name;
};

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scholarmatch
