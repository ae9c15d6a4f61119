// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BIASLENS_ERROR_H_
#define BIASLENS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace biaslens {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kDuplicatePair,
  kFileNotFound,
  kIoError,
  kEncodingError,
  kMalformedHeader,
  kFormatError,
  kEmptyResult,
  kWrongAdapterKind,
  kMissingViafId,
  kInvalidHyperparam,
  kUnknownUser,
  kUnknownItem,
  kDivergenceDetected,
  kSingularSystem,
  kDegenerateGroup,
  kZeroProfileGap,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as Error; code() carries the category so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace biaslens

#endif  // BIASLENS_ERROR_H_
