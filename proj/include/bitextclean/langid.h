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

#ifndef BITEXTCLEAN_LANGID_H_
#define BITEXTCLEAN_LANGID_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bitextclean/corpus_io.h"

namespace bitext {

inline constexpr double kDefaultReliability = 0.9;

struct LangVerdict {
  std::string lang;
  double prob = 0.0;
  bool reliable = false;
  // Posterior per label, in model label order.
  std::vector<double> posterior;
};

// Multinomial naive Bayes over lowercased, space-padded character n-grams.
class LangIdModel {
 public:
  LangIdModel() = default;

  // Throws Error(kTooFewLanguages) for fewer than two labels and
  // Error(kEmptyLanguage) when a label has no non-empty line.
  static LangIdModel Train(
      const std::map<std::string, std::vector<std::string>>& corpora,
      int min_n, int max_n, double k);

  LangVerdict Classify(std::string_view line,
                       double reliability = kDefaultReliability) const;

  void Save(std::ostream& out) const;
  static LangIdModel Load(std::istream& in);

  int min_n() const { return min_n_; }
  int max_n() const { return max_n_; }
  double k() const { return k_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& log_priors() const { return log_priors_; }
  size_t num_features() const { return features_.size(); }
  const std::string& feature(size_t i) const { return features_[i]; }
  // Natural-log probability of feature i under label l.
  double LogProb(size_t feature, size_t label) const {
    return logprob_[feature * labels_.size() + label];
  }

 private:
  // Open-addressing map from n-gram hash to feature index.
  class FeatureIndex {
   public:
    void Reserve(size_t n);
    // Returns the index, or -1 when absent.
    int64_t Find(uint64_t key) const;
    void Insert(uint64_t key, uint32_t value);
    size_t size() const { return size_; }

   private:
    void Grow();
    std::vector<uint64_t> keys_;
    std::vector<uint32_t> values_;
    size_t size_ = 0;
    size_t mask_ = 0;
  };

  template <typename Fn>
  void ForEachNgram(std::string_view line, Fn&& fn) const;

  int min_n_ = 1;
  int max_n_ = 3;
  double k_ = 0.5;
  std::vector<std::string> labels_;
  std::vector<double> log_priors_;
  std::vector<std::string> features_;
  std::vector<double> logprob_;  // feature-major, labels_.size() per feature
  FeatureIndex index_;
};

enum class PairSide { kSource, kTarget };

struct GateFailure {
  PairSide side;
  int model;  // 0 = model_a, 1 = model_b
  LangVerdict verdict;
};

struct GateResult {
  bool pass = false;
  bool src_ok = false;
  bool tgt_ok = false;
  std::vector<GateFailure> failures;
};

// Passes iff both models identify the expected language, reliably, on both
// sides.
GateResult LangIdGate(const SentencePair& pair, std::string_view expected_src,
                      std::string_view expected_tgt, const LangIdModel& model_a,
                      const LangIdModel& model_b,
                      double reliability = kDefaultReliability);

}  // namespace bitext

#endif  // BITEXTCLEAN_LANGID_H_
