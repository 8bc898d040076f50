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

#ifndef BITEXTCLEAN_LMFILTER_H_
#define BITEXTCLEAN_LMFILTER_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitextclean/corpus_io.h"

namespace bitext {

inline constexpr const char* kLmBos = "<s>";
inline constexpr const char* kLmEos = "</s>";
inline constexpr const char* kLmUnk = "<unk>";

struct LmOptions {
  int max_order = 20;
  double grow_threshold = 0.002;
};

// Modified Kneser-Ney discounts for counts 1, 2 and 3+.
struct KnDiscounts {
  double d1 = 0.5;
  double d2 = 1.0;
  double d3 = 1.5;

  double For(double count) const {
    return count >= 3 ? d3 : (count >= 2 ? d2 : (count >= 1 ? d1 : 0.0));
  }
};

// Chen-Goodman estimate from count-of-counts; falls back to the defaults
// when a statistic is zero or a discount leaves (0, k].
KnDiscounts EstimateDiscounts(double n1, double n2, double n3, double n4);

// Backoff n-gram model grown from interpolated modified Kneser-Ney
// estimates. Probabilities are stored as natural logs.
class NgramModel {
 public:
  NgramModel() = default;

  // Lines are whitespace-separated tokens. Throws Error(kEmptyCorpus) or
  // Error(kInvalidArgument) for max_order < 1.
  static NgramModel Train(const std::vector<std::string>& lines,
                          const LmOptions& options = {});

  // p(word | context), context oldest first; unknown words map to <unk>.
  double Prob(const std::vector<std::string>& context,
              const std::string& word) const;
  double LogProb(const std::vector<int>& context, int word) const;

  // Bits per token, end-of-sentence included in sum and count.
  double CrossEntropy(std::string_view line) const;

  int max_order() const { return max_order_; }
  // Highest order with at least one stored n-gram.
  int order() const { return static_cast<int>(tables_.size()); }
  size_t NumNgrams(int order) const;
  const KnDiscounts& discounts(int order) const {
    return discounts_[order - 1];
  }

  int Id(const std::string& word) const;  // <unk> id when absent
  const std::string& Word(int id) const { return words_[id]; }
  // Predictable vocabulary: every word except <s>.
  std::vector<int> PredictableIds() const;
  // Every stored n-gram of order < order() plus <s>, as id sequences.
  std::vector<std::vector<int>> Contexts() const;
  bool HasNgram(const std::vector<std::string>& ngram) const;

  void WriteArpa(std::ostream& out) const;
  static NgramModel ReadArpa(std::istream& in);

 private:
  struct Entry {
    double logp = 0.0;
    double backoff = 0.0;  // natural log; 0 when absent
    bool has_backoff = false;
  };
  using Table = std::unordered_map<std::string, Entry>;

  static std::string Key(const int* ids, int n);
  int AddWord(const std::string& word);
  double LogProbIds(const int* ctx, int n_ctx, int word) const;
  void ComputeBackoffs();

  int max_order_ = 1;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
  std::vector<Table> tables_;  // tables_[k-1] holds order-k entries
  std::vector<KnDiscounts> discounts_;
  int bos_ = 0, eos_ = 1, unk_ = 2;
};

struct CrossEntropyRecord {
  double h_src = 0.0;
  double h_tgt = 0.0;
  double avg = 0.0;
  double max = 0.0;
  double absdiff = 0.0;
};

CrossEntropyRecord MakeCrossEntropyRecord(double h_src, double h_tgt);

// Pair sides must already be segmented with the models' subword units.
CrossEntropyRecord LmFeatures(const SentencePair& pair,
                              const NgramModel& q_src,
                              const NgramModel& q_tgt);

enum class FilterMode { kStrict, kRelaxed };

FilterMode ParseFilterMode(std::string_view name);
const char* FilterModeName(FilterMode mode);

struct LmThresholds {
  double avg = 13.0;
  double diff = 4.0;
};

LmThresholds ThresholdsFor(FilterMode mode);

struct LmVerdict {
  bool pass = true;
  std::vector<std::string> reasons;  // lm_avg_ce, lm_ce_diff
};

LmVerdict LmFilter(const CrossEntropyRecord& rec, const LmThresholds& th);
inline LmVerdict LmFilter(const CrossEntropyRecord& rec, FilterMode mode) {
  return LmFilter(rec, ThresholdsFor(mode));
}

// "line_no h_src h_tgt avg max absdiff", tab separated.
std::string FormatFeatureRow(size_t line_no, const CrossEntropyRecord& rec);

}  // namespace bitext

#endif  // BITEXTCLEAN_LMFILTER_H_
