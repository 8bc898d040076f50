// Copyright 2026 The bitextclean Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bitextclean/error.h"

namespace bitext {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLineCountMismatch: return "LineCountMismatch";
    case ErrorCode::kBoundarySumMismatch: return "BoundarySumMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kTooFewLanguages: return "TooFewLanguages";
    case ErrorCode::kEmptyLanguage: return "EmptyLanguage";
    case ErrorCode::kMarkerMismatch: return "MarkerMismatch";
    case ErrorCode::kMissingPriors: return "MissingPriors";
    case ErrorCode::kMissingDocIndex: return "MissingDocIndex";
    case ErrorCode::kModelLoadError: return "ModelLoadError";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace bitext
