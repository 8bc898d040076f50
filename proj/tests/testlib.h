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

// Fixtures and reference implementations shared by the unit and acceptance
// tests. The references are written independently of the library code.

#ifndef BITEXTCLEAN_TESTS_TESTLIB_H_
#define BITEXTCLEAN_TESTS_TESTLIB_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bitextclean/corpus_io.h"
#include "bitextclean/heuristics.h"
#include "bitextclean/langid.h"
#include "bitextclean/lmfilter.h"
#include "bitextclean/pipeline.h"
#include "bitextclean/wordalign.h"

namespace bitext {
namespace testing {

// ---- reference implementations --------------------------------------------

// IBM Model 1 with a NULL word (""), uniform initialization over
// co-occurring words. Returns t[e][f]; *ll gets the per-iteration
// log-likelihood.
std::map<std::string, std::map<std::string, double>> ReferenceIbm1(
    const std::vector<std::pair<std::string, std::string>>& pairs, int iters,
    std::vector<double>* ll);

// Greedy BPE: most frequent pair first, ties to the lexicographically
// smaller pair, symbols start with a separate "</w>".
std::vector<std::pair<std::string, std::string>> ReferenceBpe(
    const std::map<std::string, int64_t>& word_counts, int num_merges,
    int64_t min_frequency);

// Interpolated modified Kneser-Ney computed directly from counts.
class ReferenceKn {
 public:
  ReferenceKn(const std::vector<std::string>& lines, int order);
  // p(w | context) with the context truncated to order-1 words.
  double Prob(std::vector<std::string> context, const std::string& w) const;
  const std::vector<std::string>& vocab() const { return vocab_; }

 private:
  using Gram = std::vector<std::string>;
  double P(int k, const Gram& h, const std::string& w) const;

  int order_;
  std::vector<std::string> vocab_;  // predictable words incl. </s>, <unk>
  std::vector<std::map<Gram, double>> adj_;  // adj_[k] for order k
  std::vector<KnDiscounts> disc_;
};

// Highest-scoring alignment path by enumerating every path.
std::vector<int> EnumerateBestPath(const std::vector<int>& emit,
                                   const std::vector<int>& gen,
                                   const AlignModel& model, double* best);

// ---- fixtures ---------------------------------------------------------------

// Random lowercase word of length [lo, hi].
std::string RandomWord(std::mt19937_64& rng, int lo, int hi);
std::string RandomSentence(std::mt19937_64& rng, int words, int lo = 3,
                           int hi = 8);

struct InjectedCorpus {
  Corpus corpus;
  // Injected category per line, or nullopt for clean lines.
  std::vector<std::optional<HeuristicRule>> label;
};

// Noise injected by construction: each noisy line violates exactly one
// heuristic rule under the commoncrawl defaults.
InjectedCorpus MakeInjectedCorpus(size_t n, uint64_t seed);

// Three synthetic languages with different syllable inventories.
std::vector<std::string> SyntheticLanguageNames();
std::string SyntheticLine(const std::string& lang, std::mt19937_64& rng,
                          int words);

// Parallel corpus where each target word is a fixed function of the source
// word at the same position.
std::vector<std::pair<std::string, std::string>> SubstitutionCorpus(
    size_t n, uint64_t seed, int vocab = 150);

// Small models for pipeline tests: langid pair over lang "src"/"tgt", priors
// and LMs trained on the clean half of a substitution corpus.
struct ToyModels {
  LangIdModel langid_a;
  LangIdModel langid_b;
  PriorSet priors;
  NgramModel lm_src;
  NgramModel lm_tgt;
};
ToyModels TrainToyModels(uint64_t seed);

// Models and a commoncrawl-style config over the xa -> xb toy languages.
PipelineModels ToyPipelineModels(const ToyModels& toy);
PipelineConfig ToyPipelineConfig(FilterMode mode);

// Mixture of clean substitution pairs, wrong-language lines, re-paired
// lines and heuristic noise.
Corpus MakePipelineFixture(size_t n, uint64_t seed);

std::string Serialize(const Corpus& corpus);

}  // namespace testing
}  // namespace bitext

#endif  // BITEXTCLEAN_TESTS_TESTLIB_H_
