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

#ifndef BITEXTCLEAN_HEURISTICS_H_
#define BITEXTCLEAN_HEURISTICS_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitextclean/corpus_io.h"

namespace bitext {

struct HeuristicConfig {
  double max_len_ratio = 9.0;
  int min_words = 0;
  int max_words = 100;
  // Words with this many characters or more are rejected.
  int max_word_chars = 40;
  bool require_digit_match = true;
  bool require_punct_match = true;
  bool strip_html = true;
  bool decode_entities = true;
  bool drop_empty = true;

  // Throws Error(kInvalidArgument) when the thresholds are inconsistent.
  void Validate() const;
};

// Defaults per corpus: commoncrawl, paracrawl, rapid, wikititles, other.
// Known WMT corpora without special settings (europarl, newscommentary,
// news, newstest, backtranslation) use "other". Throws
// Error(kUnknownDataset) for anything else.
HeuristicConfig DefaultHeuristicConfig(std::string_view dataset);

enum class HeuristicRule {
  kLenRatio,
  kMinWords,
  kMaxWords,
  kLongWord,
  kHtmlTag,
  kEntity,
  kEmpty,
  kNumber,
  kPunct,
};
inline constexpr size_t kNumHeuristicRules = 9;

// Stable identifiers used in reports: len_ratio, min_words, ...
std::string_view RuleName(HeuristicRule rule);
std::optional<HeuristicRule> ParseRuleName(std::string_view name);

struct RuleVerdict {
  HeuristicRule rule;
  bool pass;
};

struct HeuristicOutcome {
  // One entry per enabled rule, in enum order; all rules are evaluated.
  std::vector<RuleVerdict> verdicts;
  // Pair text after entity decoding (unchanged when decoding is off).
  std::string src;
  std::string tgt;

  bool passed() const;
  bool Rejected(HeuristicRule rule) const;
};

HeuristicOutcome CheckPair(const SentencePair& pair,
                           const HeuristicConfig& cfg);

// Exposed for testing and reuse.
std::string DecodeEntities(std::string_view text);
bool HasEntityResidue(std::string_view text);
bool HasHtmlTag(std::string_view text);
// Maximal ASCII digit runs, leading zeros stripped, all-zero runs dropped.
std::vector<std::string> NonZeroDigitRuns(std::string_view text);

enum class TerminalPunct { kNone, kPeriod, kExclaim, kQuestion, kEllipsis,
                           kColon, kSemicolon };
TerminalPunct TerminalPunctuation(std::string_view text);

}  // namespace bitext

#endif  // BITEXTCLEAN_HEURISTICS_H_
