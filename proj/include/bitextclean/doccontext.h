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

#ifndef BITEXTCLEAN_DOCCONTEXT_H_
#define BITEXTCLEAN_DOCCONTEXT_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "bitextclean/corpus_io.h"

namespace bitext {

enum class ContextKind {
  k2Plus1,     // previous + current source
  k3Plus1a,    // two previous + current source
  k3Plus1b,    // previous + current + next source
  k1t1sPlus1,  // previous target + current source
  k2Plus2,     // previous + current on both sides
};

struct ContextScheme {
  ContextKind kind = ContextKind::k2Plus1;
  std::string break_token = "<BRK>";

  // "2+1", "3+1a", "3+1b", "1t+1s+1", "2+2". Throws Error(kInvalidArgument).
  static ContextScheme Parse(std::string_view name);
  const char* Name() const;
};

// One output pair per input pair; context is taken from the same document
// only. Throws Error(kMissingDocIndex) without a document index and
// Error(kInvalidArgument) when the break token already occurs in the text.
Corpus BuildContext(const Corpus& corpus, const ContextScheme& scheme);

// Segment after the last break token, or the whole line.
std::string ExtractCurrent(std::string_view translated,
                           const ContextScheme& scheme);

// Seeded uniform permutation of all pairs; the result has no document index.
Corpus ShuffleDocs(const Corpus& corpus, uint64_t seed);

}  // namespace bitext

#endif  // BITEXTCLEAN_DOCCONTEXT_H_
