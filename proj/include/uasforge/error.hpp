#pragma once

#include <stdexcept>
#include <string>

#include "uasforge/source.hpp"

namespace uasforge {

/// Base of every error thrown by the toolchain. `code()` is a stable
/// machine-readable tag (e.g. "NotFound", "MissingPeriod") used by the CLI
/// and by tests.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

private:
  std::string code_;
};

/// Raised when a phase would have to continue on input that produced
/// error diagnostics.
class DiagnosticError : public Error {
public:
  DiagnosticError(std::string code, Diagnostics diags)
      : Error(std::move(code), format_all(diags)), diags_(std::move(diags)) {}

  const Diagnostics &diagnostics() const { return diags_; }

private:
  Diagnostics diags_;
};

} // namespace uasforge
