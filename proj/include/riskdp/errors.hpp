// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace riskdp {

/// Input or model validation failure. Carries a stable error code and a
/// JSON-path-like locator of the offending field so callers can report
/// precisely which part of a document is broken.
class ValidationError : public std::runtime_error {
  public:
    ValidationError(std::string code, std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? code + ": " + message
                                          : code + " at " + path + ": " + message),
          code_(std::move(code)), path_(std::move(path)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& path() const noexcept { return path_; }

  private:
    std::string code_;
    std::string path_;
};

/// A checked mathematical property failed to hold at runtime. Kept distinct
/// from ValidationError so a harness can tell "claim violated" apart from
/// "bad input".
class VerificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted before the stopping rule fired. Signals that
/// the budget was too small for the requested precision, never divergence.
class IterationLimitError : public std::runtime_error {
  public:
    explicit IterationLimitError(const std::string& message)
        : std::runtime_error("MAX_ITERS_EXCEEDED: " + message) {}
};

/// Enumeration budget exceeded; the requested brute-force computation is too
/// large for the configured limit.
class SizeLimitError : public std::runtime_error {
  public:
    explicit SizeLimitError(const std::string& message)
        : std::runtime_error("SIZE_LIMIT: " + message) {}
};

} // namespace riskdp
