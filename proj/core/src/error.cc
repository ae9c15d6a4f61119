// Copyright 2026 The BiasLens Authors
// SPDX-License-Identifier: Apache-2.0

#include "biaslens/error.h"

#include "biaslens/types.h"

namespace biaslens {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDuplicatePair: return "DuplicatePair";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEncodingError: return "EncodingError";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kEmptyResult: return "EmptyResult";
    case ErrorCode::kWrongAdapterKind: return "WrongAdapterKind";
    case ErrorCode::kMissingViafId: return "MissingViafId";
    case ErrorCode::kInvalidHyperparam: return "InvalidHyperparam";
    case ErrorCode::kUnknownUser: return "UnknownUser";
    case ErrorCode::kUnknownItem: return "UnknownItem";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kDegenerateGroup: return "DegenerateGroup";
    case ErrorCode::kZeroProfileGap: return "ZeroProfileGap";
  }
  return "Unknown";
}

std::string_view link_status_name(LinkStatus status) {
  switch (status) {
    case LinkStatus::kUnlinked: return "Unlinked";
    case LinkStatus::kNameValidated: return "NameValidated";
    case LinkStatus::kViafLinked: return "ViafLinked";
    case LinkStatus::kWikidataLinked: return "WikidataLinked";
  }
  return "Unlinked";
}

std::optional<LinkStatus> parse_link_status(std::string_view name) {
  for (auto s : {LinkStatus::kUnlinked, LinkStatus::kNameValidated,
                 LinkStatus::kViafLinked, LinkStatus::kWikidataLinked}) {
    if (link_status_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view ternary_name(Ternary t) {
  switch (t) {
    case Ternary::kYes: return "yes";
    case Ternary::kNo: return "no";
    case Ternary::kUnknown: return "unknown";
  }
  return "unknown";
}

}  // namespace biaslens
