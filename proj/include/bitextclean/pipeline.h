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

#ifndef BITEXTCLEAN_PIPELINE_H_
#define BITEXTCLEAN_PIPELINE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitextclean/config.h"
#include "bitextclean/corpus_io.h"
#include "bitextclean/heuristics.h"
#include "bitextclean/langid.h"
#include "bitextclean/lmfilter.h"
#include "bitextclean/subword.h"
#include "bitextclean/textnorm.h"
#include "bitextclean/wordalign.h"

namespace bitext {

enum class Stage { kHeuristics, kLangId, kWordAlign, kLmFilter };

const char* StageName(Stage stage);
Stage ParseStage(std::string_view name);  // throws Error(kConfigInvalid)

// Report rows, in display order.
enum class FilterId {
  kLmAvgCe,
  kLmCeDiff,
  kSrcLangId,
  kTgtLangId,
  kWordAlign,
  kNumber,
  kPunct,
  kLenRatio,
  kMinWords,
  kMaxWords,
  kLongWord,
  kHtmlTag,
  kEntity,
  kEmpty,
};
inline constexpr size_t kNumFilters = 14;

const char* FilterKey(FilterId id);    // e.g. "lm_avg_ce"
const char* FilterLabel(FilterId id);  // e.g. "LM avg CE"
FilterId FilterForRule(HeuristicRule rule);

struct PipelineConfig {
  std::vector<Stage> order = {Stage::kHeuristics, Stage::kLangId,
                              Stage::kWordAlign, Stage::kLmFilter};
  bool heuristics_enabled = true;
  bool langid_enabled = true;
  bool wordalign_enabled = true;
  bool lm_enabled = true;

  std::string dataset = "other";
  FilterMode mode = FilterMode::kStrict;
  HeuristicConfig heuristics;
  std::string src_lang = "en";
  std::string tgt_lang = "fi";
  double langid_reliability = kDefaultReliability;
  double align_threshold = kDefaultAlignThreshold;
  Sampler align_sampler = Sampler::kEm;
  std::optional<LmThresholds> lm_thresholds;  // overrides the mode

  std::string langid_a_path;
  std::string langid_b_path;
  std::string priors_path;
  std::string lm_src_path;
  std::string lm_tgt_path;
  std::string bpe_path;
  std::string truecaser_src_path;
  std::string truecaser_tgt_path;

  // Stop at the first rejecting stage; statistics become partial.
  bool fast = false;
  bool keep_verdicts = false;
  uint64_t seed = 1;
  size_t jobs = 1;

  bool Enabled(Stage stage) const;
  LmThresholds EffectiveLmThresholds() const {
    return lm_thresholds.value_or(ThresholdsFor(mode));
  }
  // Throws Error(kConfigInvalid) when an enabled stage lacks a model path
  // or a threshold is out of range.
  void Validate() const;
};

// Named recipes: dataset x mode. Web corpora (commoncrawl, paracrawl, rapid,
// wikititles) run every stage; backtranslation skips language id; the rest
// run the heuristics only.
PipelineConfig PresetConfig(std::string_view dataset, FilterMode mode);

// Preset selected by [pipeline] dataset/mode, then every other key applied
// on top. Unknown sections and keys are rejected.
PipelineConfig PipelineConfigFromIni(const IniConfig& ini);

struct PipelineModels {
  std::shared_ptr<const LangIdModel> langid_a;
  std::shared_ptr<const LangIdModel> langid_b;
  std::shared_ptr<const AlignScorer> aligner;
  std::shared_ptr<const NgramModel> lm_src;
  std::shared_ptr<const NgramModel> lm_tgt;
  std::shared_ptr<const SubwordModel> bpe;
  std::shared_ptr<const TruecaseModel> truecaser_src;
  std::shared_ptr<const TruecaseModel> truecaser_tgt;
};

// Loads every model needed by the enabled stages. Throws
// Error(kModelLoadError) when a file is missing or malformed.
PipelineModels LoadModels(const PipelineConfig& cfg);

struct PairVerdict {
  size_t line_no = 0;
  uint32_t rejected = 0;  // bit per FilterId
  std::optional<double> align_score;
  std::optional<CrossEntropyRecord> lm;

  bool Rejected(FilterId id) const {
    return (rejected >> static_cast<int>(id)) & 1u;
  }
};

struct FilterReport {
  std::string label;  // column header, e.g. "strict"
  bool fast = false;
  size_t input = 0;
  std::array<size_t, kNumFilters> rejects{};
  size_t total_rejected = 0;
  std::vector<PairVerdict> verdicts;

  double Percent(size_t count) const;
  void Add(const PairVerdict& v, bool keep);
  void Merge(const FilterReport& other);

  void Save(std::ostream& out) const;
  static FilterReport Load(std::istream& in);  // Error(kModelLoadError)
};

struct PipelineResult {
  Corpus kept;
  Corpus rejected;
  FilterReport report;
  // Wall-clock seconds per stage, summed over shards; not deterministic.
  std::array<double, 4> stage_seconds{};
};

// Evaluates the enabled stages on every pair. Throws Error(kConfigInvalid)
// when an enabled stage has no model.
PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& cfg,
                           const PipelineModels& models);

// Verdict for one pair, as used by RunPipeline.
PairVerdict EvaluatePair(const SentencePair& pair, const PipelineConfig& cfg,
                         const PipelineModels& models,
                         std::array<double, 4>* stage_seconds = nullptr);

// Tokens segmented for the LM: optional truecasing then BPE.
std::string PrepareLmSide(std::string_view text, const SubwordModel* bpe,
                          const TruecaseModel* truecaser);

enum class ReportFormat { kText, kTsv };

// One column per report; rows in FilterId order and then "total".
std::string RenderReport(const std::vector<FilterReport>& columns,
                         ReportFormat format);

}  // namespace bitext

#endif  // BITEXTCLEAN_PIPELINE_H_
