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

#ifndef BITEXTCLEAN_SUBWORD_H_
#define BITEXTCLEAN_SUBWORD_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitextclean/corpus_io.h"

namespace bitext {

inline constexpr std::string_view kBpeEndMarker = "</w>";
inline constexpr std::string_view kBpeContinuation = "@@";
inline constexpr std::string_view kGlueRight = "\xE2\x86\x92";  // U+2192
inline constexpr std::string_view kGlueLeft = "\xE2\x86\x90";   // U+2190

// Tokens of the form <NAME> (uppercase ASCII, digits, '_') are reserved for
// domain labels and context separators; BPE never learns from or splits them.
bool IsReservedToken(std::string_view token);

struct BpeOptions {
  int num_merges = 35000;
  // Symbols whose training frequency is below this are re-split on apply.
  int64_t vocab_threshold = 0;
  // Learning stops once the best pair is rarer than this.
  int64_t min_frequency = 2;
  bool joint = true;
};

// Named settings: "ende" (35000 merges), "enfi" (37000) and "bpe50k"
// (50000 merges, vocabulary threshold 50). Throws Error(kInvalidArgument).
BpeOptions BpeRecipe(std::string_view name);

using MergePair = std::pair<std::string, std::string>;

class SubwordModel {
 public:
  SubwordModel() = default;
  SubwordModel(std::vector<MergePair> merges,
               std::unordered_map<std::string, int64_t> vocab,
               int64_t vocab_threshold, bool joint);

  const std::vector<MergePair>& merges() const { return merges_; }
  const std::unordered_map<std::string, int64_t>& vocab() const {
    return vocab_;
  }
  int64_t vocab_threshold() const { return vocab_threshold_; }
  bool joint() const { return joint_; }

  void set_vocab_threshold(int64_t t) { vocab_threshold_ = t; }
  void set_vocab(std::unordered_map<std::string, int64_t> vocab) {
    vocab_ = std::move(vocab);
  }

  // Pieces of one token, non-final pieces carrying the "@@" suffix.
  std::vector<std::string> Segment(std::string_view token) const;
  std::vector<std::string> Apply(const std::vector<std::string>& tokens) const;

  // Merge file: "#version: 0.2" header then one "left right" pair per line.
  void SaveMerges(std::ostream& out) const;
  static SubwordModel LoadMerges(std::istream& in);
  // Vocabulary file: "piece count" per line, most frequent first.
  void SaveVocab(std::ostream& out) const;
  static std::unordered_map<std::string, int64_t> LoadVocab(std::istream& in);

 private:
  struct PairHash {
    size_t operator()(const MergePair& p) const noexcept;
  };

  // Raw merge loop over symbols ending in the end marker.
  std::vector<std::string> MergeSymbols(std::string_view token) const;
  bool InVocab(const std::string& piece) const;
  void SplitRecursive(const std::string& symbol, bool final,
                      std::vector<std::pair<std::string, bool>>* out) const;

  std::vector<MergePair> merges_;
  std::unordered_map<MergePair, int, PairHash> rank_;
  std::unordered_map<std::string, MergePair> reverse_;
  std::unordered_map<std::string, int64_t> vocab_;
  int64_t vocab_threshold_ = 0;
  bool joint_ = true;
};

// Learns merges from whitespace-tokenized lines. Reserved tokens are skipped.
// Throws Error(kEmptyCorpus) when there is no token to learn from.
SubwordModel LearnBpe(const std::vector<std::string>& lines,
                      const BpeOptions& options);
SubwordModel LearnBpeFromCounts(
    const std::vector<std::pair<std::string, int64_t>>& word_counts,
    const BpeOptions& options);

// Inverse of Apply: joins "@@"-continued pieces.
std::vector<std::string> Unsegment(const std::vector<std::string>& pieces);

// Applies BPE to morph-segmented text whose units are glued by trailing
// U+2192 / leading U+2190 markers. Throws Error(kMarkerMismatch) when a
// marker has no partner.
std::vector<std::string> PreSegmentCompose(
    const std::vector<std::string>& morph_tokens, const SubwordModel& model);
void ValidateGlueMarkers(const std::vector<std::string>& morph_tokens);
// Removes BPE continuation and glue markers, giving back surface words.
std::vector<std::string> RestoreWords(const std::vector<std::string>& pieces);

struct DomainLabel {
  std::string name;  // e.g. "NEWS"

  static DomainLabel News() { return {"NEWS"}; }
  static DomainLabel Europarl() { return {"EP"}; }
  static DomainLabel Web() { return {"WEB"}; }

  std::string token() const { return "<" + name + ">"; }
};

// Prepends the label token to the source side, replacing an existing label.
SentencePair AddDomainLabel(SentencePair pair, const DomainLabel& label);

}  // namespace bitext

#endif  // BITEXTCLEAN_SUBWORD_H_
