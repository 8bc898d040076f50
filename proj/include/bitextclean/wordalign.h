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

#ifndef BITEXTCLEAN_WORDALIGN_H_
#define BITEXTCLEAN_WORDALIGN_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitextclean/corpus_io.h"

namespace bitext {

inline constexpr int kMaxJump = 10;
inline constexpr int kJumpBins = 2 * kMaxJump + 1;
inline constexpr double kNullProb = 0.05;
inline constexpr double kDefaultAlignThreshold = 7.0;
inline constexpr double kDefaultPriorAlpha = 0.01;

inline int ClampJump(int d) {
  return d < -kMaxJump ? -kMaxJump : (d > kMaxJump ? kMaxJump : d);
}

// Word <-> id mapping. Id 0 is the NULL word, id 1 the unknown word.
class Vocab {
 public:
  static constexpr int kNull = 0;
  static constexpr int kUnk = 1;

  Vocab();
  int Add(std::string_view word);
  int Find(std::string_view word) const;  // kUnk when absent
  const std::string& Word(int id) const { return words_[id]; }
  // Includes NULL and UNK.
  int size() const { return static_cast<int>(words_.size()); }

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> words_;
};

// Which side emits the other: kForward models p(tgt | src).
enum class AlignDirection { kForward, kReverse };

// Lexical translation table t(f|e), a jump distribution over clamped
// offsets, and a fixed NULL probability.
class AlignModel {
 public:
  AlignModel() = default;

  AlignDirection direction = AlignDirection::kForward;
  Vocab e_vocab;  // emitting side
  Vocab f_vocab;  // generated side
  double p_null = kNullProb;
  std::array<double, kJumpBins> jump{};
  // Per-emitter fertility histograms (index = fertility), when collected.
  std::optional<std::unordered_map<int, std::vector<double>>> fertility;

  double T(int e, int f) const;
  double Jump(int d) const { return jump[ClampJump(d) + kMaxJump]; }
  void SetT(int e, int f, double p) { t_[Key(e, f)] = p; }
  void SetRowFloor(int e, double p);
  void set_uniform_floor(double p) { uniform_floor_ = p; }

  // Sum of t(f|e) over every f in f_vocab except NULL.
  double RowSum(int e) const;
  const std::unordered_map<uint64_t, double>& table() const { return t_; }

  static uint64_t Key(int e, int f) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(e)) << 32) |
           static_cast<uint32_t>(f);
  }

 private:
  std::unordered_map<uint64_t, double> t_;
  std::vector<double> row_floor_;
  double uniform_floor_ = 0.0;
};

// Links are (source index, target index). A directional alignment from the
// forward model has at most one link per target index; unlinked indices are
// aligned to NULL.
struct AlignmentLinks {
  std::set<std::pair<int, int>> links;
};

// Link counts gathered from symmetrized alignments of clean data.
struct PriorSet {
  double alpha = kDefaultPriorAlpha;
  // (src word, tgt word) -> count; "<NULL>" on either side for unlinked
  // words.
  std::map<std::pair<std::string, std::string>, double> lexical_counts;
  std::array<double, kJumpBins> jump_fwd{};
  std::array<double, kJumpBins> jump_rev{};

  bool empty() const { return lexical_counts.empty(); }
  // Smallest value any smoothed lookup can return (alpha itself).
  double floor() const { return alpha; }

  void Save(std::ostream& out) const;
  static PriorSet Load(std::istream& in);
};

enum class Sampler { kEm, kGibbs };

struct AlignOptions {
  int iters_ibm1 = 5;
  int iters_hmm = 5;
  Sampler sampler = Sampler::kEm;
  uint64_t seed = 1;
  double alpha = kDefaultPriorAlpha;
  bool fertility = false;
  // Dirichlet hyper-parameters for the Gibbs sampler.
  double lex_prior = 0.001;
  double jump_prior = 0.5;
  double fertility_prior = 0.5;
};

struct AlignTrainingLog {
  // Training log-likelihood before each M-step.
  std::vector<double> ibm1_fwd, ibm1_rev, hmm_fwd, hmm_rev;
};

struct AlignTrainResult {
  AlignModel fwd;
  AlignModel rev;
  PriorSet priors;
  std::vector<AlignmentLinks> symmetrized;
  AlignTrainingLog log;
};

// IBM1 warm start, then HMM training in both directions; the Viterbi links
// are symmetrized with grow-diag-final-and and turned into priors.
// Throws Error(kEmptyCorpus) or Error(kInvalidArgument) for zero iterations.
AlignTrainResult TrainAlign(const Corpus& clean, const AlignOptions& options);

// Tokenized sentence pair as vocabulary ids.
struct EncodedPair {
  std::vector<int> src;
  std::vector<int> tgt;
};

// IBM Model 1 EM on the emitting/generated sides; returns per-iteration
// log-likelihood in *log.
AlignModel TrainIbm1(const std::vector<std::vector<int>>& emit,
                     const std::vector<std::vector<int>>& gen,
                     const Vocab& e_vocab, const Vocab& f_vocab, int iters,
                     std::vector<double>* log);

// Baum-Welch on the HMM starting from `model` (updated in place).
void TrainHmmEm(const std::vector<std::vector<int>>& emit,
                const std::vector<std::vector<int>>& gen, int iters,
                AlignModel* model, std::vector<double>* log);

// Log-likelihood of one sentence under the HMM (sum over alignments).
double HmmLogLikelihood(const std::vector<int>& emit,
                        const std::vector<int>& gen, const AlignModel& model);

// Best alignment: entry j is the emitter position of generated token j, or
// -1 for NULL.
std::vector<int> ViterbiAlign(const std::vector<int>& emit,
                              const std::vector<int>& gen,
                              const AlignModel& model);

// Log-probability of a fixed alignment path, including transitions.
double PathLogProb(const std::vector<int>& emit, const std::vector<int>& gen,
                   const std::vector<int>& path, const AlignModel& model);

// Mean over generated tokens of -ln(t * jump) for the given path, with
// -ln(t(f|NULL) * p_null) for NULL links.
double MeanLinkCost(const std::vector<int>& emit, const std::vector<int>& gen,
                    const std::vector<int>& path, const AlignModel& model);

AlignmentLinks GrowDiagFinalAnd(int src_len, int tgt_len,
                                const AlignmentLinks& fwd,
                                const AlignmentLinks& rev);

PriorSet BuildPriors(const Corpus& corpus,
                     const std::vector<AlignmentLinks>& links, double alpha);

// Normalized model for one direction from the priors.
AlignModel ModelFromPriors(const PriorSet& priors, AlignDirection direction);

struct ScoreOptions {
  Sampler sampler = Sampler::kEm;
  uint64_t seed = 1;
};

// Alignment cost per pair (lower is better); +inf when a side is empty.
// Throws Error(kMissingPriors) for empty priors.
std::vector<double> ScorePairs(const Corpus& noisy, const PriorSet& priors,
                               const ScoreOptions& options = {});

// Scorer holding both directional models, for per-pair use.
class AlignScorer {
 public:
  AlignScorer(const PriorSet& priors, ScoreOptions options = {});
  double Score(const SentencePair& pair) const;

 private:
  AlignModel fwd_;
  AlignModel rev_;
  ScoreOptions options_;
};

inline bool AlignFilter(double score,
                        double threshold = kDefaultAlignThreshold) {
  return score <= threshold;
}

}  // namespace bitext

#endif  // BITEXTCLEAN_WORDALIGN_H_
