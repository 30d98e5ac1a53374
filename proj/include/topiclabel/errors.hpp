#pragma once

#include <stdexcept>
#include <string>

namespace topiclabel {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration or unusable input paths.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A remote (or stub) backend failed. `attempts` counts transport tries
// actually made; 0 for non-transport failures.
class BackendError : public Error {
 public:
  BackendError(const std::string& what, int attempts = 0, bool retryable = false)
      : Error(what), attempts_(attempts), retryable_(retryable) {}

  int attempts() const { return attempts_; }
  bool retryable() const { return retryable_; }

 private:
  int attempts_;
  bool retryable_;
};

// A pipeline stage aborted; carries the stage name so callers can report
// "failed at <stage>: <cause>" and map to exit codes.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause, bool backend_cause = false)
      : Error(stage + ": " + cause), stage_(stage), backend_cause_(backend_cause) {}

  const std::string& stage() const { return stage_; }
  bool backend_cause() const { return backend_cause_; }

 private:
  std::string stage_;
  bool backend_cause_;
};

}  // namespace topiclabel
