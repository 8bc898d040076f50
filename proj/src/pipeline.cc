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

#include "bitextclean/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

struct FilterInfo {
  const char* key;
  const char* label;
};

constexpr FilterInfo kFilters[kNumFilters] = {
    {"lm_avg_ce", "LM avg CE"},   {"lm_ce_diff", "LM CE diff"},
    {"src_langid", "Src lang ID"}, {"tgt_langid", "Trg lang ID"},
    {"wordalign", "Wordalign"},    {"number", "Number"},
    {"punct", "Punct"},            {"len_ratio", "Length ratio"},
    {"min_words", "Min words"},    {"max_words", "Max words"},
    {"long_word", "Long word"},    {"html_tag", "HTML tag"},
    {"entity", "Entity"},          {"empty", "Empty"},
};

uint32_t Bit(FilterId id) { return 1u << static_cast<int>(id); }

[[noreturn]] void Invalid(const std::string& msg) {
  throw Error(ErrorCode::kConfigInvalid, msg);
}

std::string Lower(std::string_view s) { return utf8::ToLower(s); }

std::ifstream OpenModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kModelLoadError, "cannot open " + path);
  return in;
}

template <typename T, typename Fn>
std::shared_ptr<const T> LoadWith(const std::string& path, Fn&& fn) {
  auto in = OpenModel(path);
  try {
    return std::make_shared<const T>(fn(in));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kModelLoadError) throw;
    throw Error(ErrorCode::kModelLoadError, path + ": " + e.what());
  }
}

class StageTimer {
 public:
  StageTimer(std::array<double, 4>* acc, Stage stage)
      : acc_(acc), stage_(stage), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    if (acc_ == nullptr) return;
    (*acc_)[static_cast<int>(stage_)] +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
  }

 private:
  std::array<double, 4>* acc_;
  Stage stage_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

const char* StageName(Stage stage) {
  switch (stage) {
    case Stage::kHeuristics: return "heuristics";
    case Stage::kLangId: return "langid";
    case Stage::kWordAlign: return "wordalign";
    case Stage::kLmFilter: return "lmfilter";
  }
  return "?";
}

Stage ParseStage(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "heuristics") return Stage::kHeuristics;
  if (n == "langid") return Stage::kLangId;
  if (n == "wordalign") return Stage::kWordAlign;
  if (n == "lmfilter" || n == "lm") return Stage::kLmFilter;
  Invalid("unknown stage '" + std::string(name) + "'");
}

const char* FilterKey(FilterId id) { return kFilters[static_cast<int>(id)].key; }
const char* FilterLabel(FilterId id) {
  return kFilters[static_cast<int>(id)].label;
}

FilterId FilterForRule(HeuristicRule rule) {
  switch (rule) {
    case HeuristicRule::kLenRatio: return FilterId::kLenRatio;
    case HeuristicRule::kMinWords: return FilterId::kMinWords;
    case HeuristicRule::kMaxWords: return FilterId::kMaxWords;
    case HeuristicRule::kLongWord: return FilterId::kLongWord;
    case HeuristicRule::kHtmlTag: return FilterId::kHtmlTag;
    case HeuristicRule::kEntity: return FilterId::kEntity;
    case HeuristicRule::kEmpty: return FilterId::kEmpty;
    case HeuristicRule::kNumber: return FilterId::kNumber;
    case HeuristicRule::kPunct: return FilterId::kPunct;
  }
  return FilterId::kEmpty;
}

bool PipelineConfig::Enabled(Stage stage) const {
  bool on = false;
  switch (stage) {
    case Stage::kHeuristics: on = heuristics_enabled; break;
    case Stage::kLangId: on = langid_enabled; break;
    case Stage::kWordAlign: on = wordalign_enabled; break;
    case Stage::kLmFilter: on = lm_enabled; break;
  }
  return on && std::find(order.begin(), order.end(), stage) != order.end();
}

void PipelineConfig::Validate() const {
  std::set<Stage> seen;
  for (Stage s : order) {
    if (!seen.insert(s).second) Invalid("stage listed twice");
  }
  try {
    heuristics.Validate();
  } catch (const Error& e) {
    Invalid(e.what());
  }
  if (!(langid_reliability >= 0.0 && langid_reliability <= 1.0)) {
    Invalid("langid reliability must be in [0, 1]");
  }
  if (std::isnan(align_threshold)) Invalid("wordalign threshold is NaN");
  if (jobs == 0) Invalid("jobs must be >= 1");
  if (Enabled(Stage::kLangId) &&
      (langid_a_path.empty() || langid_b_path.empty())) {
    Invalid("langid stage needs model_a and model_b");
  }
  if (Enabled(Stage::kWordAlign) && priors_path.empty()) {
    Invalid("wordalign stage needs priors");
  }
  if (Enabled(Stage::kLmFilter) &&
      (lm_src_path.empty() || lm_tgt_path.empty())) {
    Invalid("lmfilter stage needs src_model and tgt_model");
  }
}

PipelineConfig PresetConfig(std::string_view dataset, FilterMode mode) {
  PipelineConfig cfg;
  cfg.dataset = Lower(dataset);
  cfg.mode = mode;
  try {
    cfg.heuristics = DefaultHeuristicConfig(cfg.dataset);
  } catch (const Error& e) {
    Invalid(e.what());
  }
  const bool web = cfg.dataset == "commoncrawl" || cfg.dataset == "paracrawl" ||
                   cfg.dataset == "rapid" || cfg.dataset == "wikititles";
  const bool bt = cfg.dataset == "backtranslation";
  cfg.langid_enabled = web;
  cfg.wordalign_enabled = web || bt;
  cfg.lm_enabled = web || bt;
  return cfg;
}

PipelineConfig PipelineConfigFromIni(const IniConfig& ini) {
  static const std::map<std::string, std::set<std::string>> kKnown = {
      {"pipeline",
       {"dataset", "mode", "stages", "fast", "seed", "jobs", "src_lang",
        "tgt_lang", "keep_verdicts"}},
      {"heuristics",
       {"enabled", "max_len_ratio", "min_words", "max_words", "max_word_chars",
        "number", "punct", "strip_html", "decode_entities", "drop_empty"}},
      {"langid", {"enabled", "model_a", "model_b", "reliability"}},
      {"wordalign", {"enabled", "priors", "threshold", "sampler"}},
      {"lmfilter",
       {"enabled", "src_model", "tgt_model", "bpe_codes", "truecaser_src",
        "truecaser_tgt", "avg_threshold", "diff_threshold"}},
  };
  for (const auto& s : ini.Sections()) {
    auto it = kKnown.find(s);
    if (it == kKnown.end()) {
      if (ini.Keys(s).empty() && s.empty()) continue;
      Invalid("unknown config section [" + s + "]");
    }
    for (const auto& k : ini.Keys(s)) {
      if (!it->second.count(k)) Invalid("unknown key " + s + "." + k);
    }
  }
  FilterMode mode;
  try {
    mode = ParseFilterMode(ini.GetString("pipeline", "mode", "strict"));
  } catch (const Error& e) {
    Invalid(e.what());
  }
  PipelineConfig cfg =
      PresetConfig(ini.GetString("pipeline", "dataset", "other"), mode);
  if (auto st = ini.Get("pipeline", "stages")) {
    cfg.order.clear();
    std::stringstream ss(*st);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto t = utf8::SplitWhitespace(name);
      if (t.size() != 1) Invalid("bad stage list: " + *st);
      cfg.order.push_back(ParseStage(t[0]));
    }
  }
  cfg.fast = ini.GetBool("pipeline", "fast", cfg.fast);
  cfg.keep_verdicts = ini.GetBool("pipeline", "keep_verdicts", false);
  const int64_t seed = ini.GetInt("pipeline", "seed", 1);
  cfg.seed = static_cast<uint64_t>(seed);
  const int64_t jobs = ini.GetInt("pipeline", "jobs", 1);
  if (jobs < 1) Invalid("pipeline.jobs must be >= 1");
  cfg.jobs = static_cast<size_t>(jobs);
  cfg.src_lang = ini.GetString("pipeline", "src_lang", cfg.src_lang);
  cfg.tgt_lang = ini.GetString("pipeline", "tgt_lang", cfg.tgt_lang);

  HeuristicConfig& h = cfg.heuristics;
  cfg.heuristics_enabled = ini.GetBool("heuristics", "enabled", true);
  h.max_len_ratio = ini.GetDouble("heuristics", "max_len_ratio", h.max_len_ratio);
  h.min_words = static_cast<int>(ini.GetInt("heuristics", "min_words", h.min_words));
  h.max_words = static_cast<int>(ini.GetInt("heuristics", "max_words", h.max_words));
  h.max_word_chars = static_cast<int>(
      ini.GetInt("heuristics", "max_word_chars", h.max_word_chars));
  h.require_digit_match =
      ini.GetBool("heuristics", "number", h.require_digit_match);
  h.require_punct_match =
      ini.GetBool("heuristics", "punct", h.require_punct_match);
  h.strip_html = ini.GetBool("heuristics", "strip_html", h.strip_html);
  h.decode_entities =
      ini.GetBool("heuristics", "decode_entities", h.decode_entities);
  h.drop_empty = ini.GetBool("heuristics", "drop_empty", h.drop_empty);

  cfg.langid_enabled = ini.GetBool("langid", "enabled", cfg.langid_enabled);
  cfg.langid_a_path = ini.GetString("langid", "model_a", "");
  cfg.langid_b_path = ini.GetString("langid", "model_b", "");
  cfg.langid_reliability =
      ini.GetDouble("langid", "reliability", cfg.langid_reliability);

  cfg.wordalign_enabled =
      ini.GetBool("wordalign", "enabled", cfg.wordalign_enabled);
  cfg.priors_path = ini.GetString("wordalign", "priors", "");
  cfg.align_threshold =
      ini.GetDouble("wordalign", "threshold", cfg.align_threshold);
  const std::string sampler = Lower(ini.GetString("wordalign", "sampler", "em"));
  if (sampler == "em") {
    cfg.align_sampler = Sampler::kEm;
  } else if (sampler == "gibbs") {
    cfg.align_sampler = Sampler::kGibbs;
  } else {
    Invalid("wordalign.sampler must be em or gibbs");
  }

  cfg.lm_enabled = ini.GetBool("lmfilter", "enabled", cfg.lm_enabled);
  cfg.lm_src_path = ini.GetString("lmfilter", "src_model", "");
  cfg.lm_tgt_path = ini.GetString("lmfilter", "tgt_model", "");
  cfg.bpe_path = ini.GetString("lmfilter", "bpe_codes", "");
  cfg.truecaser_src_path = ini.GetString("lmfilter", "truecaser_src", "");
  cfg.truecaser_tgt_path = ini.GetString("lmfilter", "truecaser_tgt", "");
  if (ini.Has("lmfilter", "avg_threshold") ||
      ini.Has("lmfilter", "diff_threshold")) {
    LmThresholds th = ThresholdsFor(cfg.mode);
    th.avg = ini.GetDouble("lmfilter", "avg_threshold", th.avg);
    th.diff = ini.GetDouble("lmfilter", "diff_threshold", th.diff);
    cfg.lm_thresholds = th;
  }
  return cfg;
}

PipelineModels LoadModels(const PipelineConfig& cfg) {
  cfg.Validate();
  PipelineModels m;
  if (cfg.Enabled(Stage::kLangId)) {
    auto load = [](std::istream& in) { return LangIdModel::Load(in); };
    m.langid_a = LoadWith<LangIdModel>(cfg.langid_a_path, load);
    m.langid_b = LoadWith<LangIdModel>(cfg.langid_b_path, load);
  }
  if (cfg.Enabled(Stage::kWordAlign)) {
    m.aligner = LoadWith<AlignScorer>(cfg.priors_path, [&](std::istream& in) {
      ScoreOptions so;
      so.sampler = cfg.align_sampler;
      so.seed = cfg.seed;
      return AlignScorer(PriorSet::Load(in), so);
    });
  }
  if (cfg.Enabled(Stage::kLmFilter)) {
    auto load = [](std::istream& in) { return NgramModel::ReadArpa(in); };
    m.lm_src = LoadWith<NgramModel>(cfg.lm_src_path, load);
    m.lm_tgt = LoadWith<NgramModel>(cfg.lm_tgt_path, load);
    if (!cfg.bpe_path.empty()) {
      m.bpe = LoadWith<SubwordModel>(cfg.bpe_path, [](std::istream& in) {
        return SubwordModel::LoadMerges(in);
      });
    }
    auto tc = [](std::istream& in) { return TruecaseModel::Load(in); };
    if (!cfg.truecaser_src_path.empty()) {
      m.truecaser_src = LoadWith<TruecaseModel>(cfg.truecaser_src_path, tc);
    }
    if (!cfg.truecaser_tgt_path.empty()) {
      m.truecaser_tgt = LoadWith<TruecaseModel>(cfg.truecaser_tgt_path, tc);
    }
  }
  return m;
}

std::string PrepareLmSide(std::string_view text, const SubwordModel* bpe,
                          const TruecaseModel* truecaser) {
  if (bpe == nullptr && truecaser == nullptr) return std::string(text);
  std::vector<std::string> tokens = utf8::SplitWhitespace(text);
  if (truecaser != nullptr) tokens = Truecase(tokens, *truecaser);
  if (bpe != nullptr) tokens = bpe->Apply(tokens);
  return utf8::Join(tokens, " ");
}

PairVerdict EvaluatePair(const SentencePair& pair, const PipelineConfig& cfg,
                         const PipelineModels& models,
                         std::array<double, 4>* stage_seconds) {
  PairVerdict v;
  v.line_no = pair.line_no;
  for (Stage stage : cfg.order) {
    if (!cfg.Enabled(stage)) continue;
    if (cfg.fast && v.rejected != 0) break;
    StageTimer timer(stage_seconds, stage);
    switch (stage) {
      case Stage::kHeuristics: {
        const HeuristicOutcome out = CheckPair(pair, cfg.heuristics);
        for (const auto& rv : out.verdicts) {
          if (!rv.pass) v.rejected |= Bit(FilterForRule(rv.rule));
        }
        break;
      }
      case Stage::kLangId: {
        const GateResult g =
            LangIdGate(pair, cfg.src_lang, cfg.tgt_lang, *models.langid_a,
                       *models.langid_b, cfg.langid_reliability);
        if (!g.src_ok) v.rejected |= Bit(FilterId::kSrcLangId);
        if (!g.tgt_ok) v.rejected |= Bit(FilterId::kTgtLangId);
        break;
      }
      case Stage::kWordAlign: {
        const double s = models.aligner->Score(pair);
        v.align_score = s;
        if (!AlignFilter(s, cfg.align_threshold)) {
          v.rejected |= Bit(FilterId::kWordAlign);
        }
        break;
      }
      case Stage::kLmFilter: {
        SentencePair seg = pair;
        seg.src = PrepareLmSide(pair.src, models.bpe.get(),
                                models.truecaser_src.get());
        seg.tgt = PrepareLmSide(pair.tgt, models.bpe.get(),
                                models.truecaser_tgt.get());
        const CrossEntropyRecord rec =
            LmFeatures(seg, *models.lm_src, *models.lm_tgt);
        v.lm = rec;
        const LmVerdict lv = LmFilter(rec, cfg.EffectiveLmThresholds());
        for (const auto& r : lv.reasons) {
          v.rejected |= Bit(r == "lm_avg_ce" ? FilterId::kLmAvgCe
                                             : FilterId::kLmCeDiff);
        }
        break;
      }
    }
  }
  return v;
}

double FilterReport::Percent(size_t count) const {
  return input == 0 ? 0.0 : 100.0 * static_cast<double>(count) /
                                static_cast<double>(input);
}

void FilterReport::Add(const PairVerdict& v, bool keep) {
  ++input;
  for (size_t i = 0; i < kNumFilters; ++i) {
    if ((v.rejected >> i) & 1u) ++rejects[i];
  }
  if (v.rejected != 0) ++total_rejected;
  if (keep) verdicts.push_back(v);
}

void FilterReport::Merge(const FilterReport& other) {
  input += other.input;
  for (size_t i = 0; i < kNumFilters; ++i) rejects[i] += other.rejects[i];
  total_rejected += other.total_rejected;
  fast = fast || other.fast;
  verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
}

void FilterReport::Save(std::ostream& out) const {
  out << "#report\t" << (label.empty() ? "-" : label) << '\t'
      << (fast ? "fast" : "full") << '\t' << input << '\n';
  for (size_t i = 0; i < kNumFilters; ++i) {
    out << kFilters[i].key << '\t' << rejects[i] << '\n';
  }
  out << "total\t" << total_rejected << '\n';
}

FilterReport FilterReport::Load(std::istream& in) {
  auto fail = [](const std::string& why) {
    return Error(ErrorCode::kModelLoadError, "report: " + why);
  };
  FilterReport r;
  std::string line;
  if (!std::getline(in, line)) throw fail("empty file");
  {
    std::stringstream ss(line);
    std::string tag, label, mode, input;
    std::getline(ss, tag, '\t');
    std::getline(ss, label, '\t');
    std::getline(ss, mode, '\t');
    std::getline(ss, input, '\t');
    if (tag != "#report" || (mode != "fast" && mode != "full")) {
      throw fail("bad header");
    }
    r.label = label == "-" ? "" : label;
    r.fast = mode == "fast";
    try {
      r.input = std::stoull(input);
    } catch (const std::exception&) {
      throw fail("bad input count");
    }
  }
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < kNumFilters; ++i) index[kFilters[i].key] = i;
  bool have_total = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail("bad row: " + line);
    const std::string key = line.substr(0, tab);
    size_t n;
    try {
      n = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw fail("bad count: " + line);
    }
    if (key == "total") {
      r.total_rejected = n;
      have_total = true;
    } else if (auto it = index.find(key); it != index.end()) {
      r.rejects[it->second] = n;
    } else {
      throw fail("unknown filter " + key);
    }
  }
  if (!have_total) throw fail("missing total");
  return r;
}

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& cfg,
                           const PipelineModels& models) {
  if (cfg.jobs == 0) Invalid("jobs must be >= 1");
  if (cfg.Enabled(Stage::kLangId) && (!models.langid_a || !models.langid_b)) {
    Invalid("langid stage enabled without models");
  }
  if (cfg.Enabled(Stage::kWordAlign) && !models.aligner) {
    Invalid("wordalign stage enabled without priors");
  }
  if (cfg.Enabled(Stage::kLmFilter) && (!models.lm_src || !models.lm_tgt)) {
    Invalid("lmfilter stage enabled without language models");
  }

  const std::vector<Corpus> shards =
      Shard(corpus, std::max<size_t>(1, std::min(cfg.jobs, corpus.size())));
  std::vector<std::vector<PairVerdict>> verdicts(shards.size());
  std::vector<std::array<double, 4>> seconds(shards.size());
  auto work = [&](size_t s) {
    verdicts[s].reserve(shards[s].size());
    for (const auto& p : shards[s].pairs()) {
      verdicts[s].push_back(EvaluatePair(p, cfg, models, &seconds[s]));
    }
  };
  if (shards.size() == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (size_t s = 0; s < shards.size(); ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }

  PipelineResult result;
  result.report.label = cfg.mode == FilterMode::kRelaxed ? "relax" : "strict";
  if (cfg.fast) result.report.label += " (fast)";
  result.report.fast = cfg.fast;
  std::vector<SentencePair> kept, rejected;
  std::vector<std::pair<std::string, size_t>> kept_docs, rej_docs;
  auto bump = [](std::vector<std::pair<std::string, size_t>>* docs,
                 const std::optional<std::string>& id) {
    if (!id) return;
    if (docs->empty() || docs->back().first != *id) docs->push_back({*id, 0});
    ++docs->back().second;
  };
  for (size_t s = 0; s < shards.size(); ++s) {
    for (size_t i = 0; i < shards[s].size(); ++i) {
      const PairVerdict& v = verdicts[s][i];
      result.report.Add(v, cfg.keep_verdicts);
      const SentencePair& p = shards[s][i];
      if (v.rejected == 0) {
        kept.push_back(p);
        bump(&kept_docs, p.doc_id);
      } else {
        rejected.push_back(p);
        bump(&rej_docs, p.doc_id);
      }
    }
    for (int k = 0; k < 4; ++k) result.stage_seconds[k] += seconds[s][k];
  }
  if (corpus.has_doc_index()) {
    result.kept = Corpus::WithDocuments(std::move(kept), kept_docs);
    result.rejected = Corpus::WithDocuments(std::move(rejected), rej_docs);
  } else {
    result.kept = Corpus(std::move(kept));
    result.rejected = Corpus(std::move(rejected));
  }
  return result;
}

std::string RenderReport(const std::vector<FilterReport>& columns,
                         ReportFormat format) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Filter"};
  for (const auto& c : columns) {
    header.push_back(c.label.empty() ? (c.fast ? "(fast)" : "rejected")
                                     : c.label);
  }
  rows.push_back(header);
  auto pct = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", x);
    return std::string(buf);
  };
  for (size_t i = 0; i < kNumFilters; ++i) {
    std::vector<std::string> row{kFilters[i].label};
    for (const auto& c : columns) row.push_back(pct(c.Percent(c.rejects[i])));
    rows.push_back(row);
  }
  std::vector<std::string> total{"total"};
  for (const auto& c : columns) total.push_back(pct(c.Percent(c.total_rejected)));
  rows.push_back(total);

  std::string out;
  if (format == ReportFormat::kTsv) {
    for (const auto& row : rows) {
      out += utf8::Join(row, "\t");
      out += '\n';
    }
    return out;
  }
  std::vector<size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k) {
      width[k] = std::max(width[k], utf8::Length(row[k]));
    }
  }
  for (const auto& row : rows) {
    std::string line;
    for (size_t k = 0; k < row.size(); ++k) {
      const size_t pad = width[k] - utf8::Length(row[k]);
      if (k == 0) {
        line += row[k] + std::string(pad, ' ');
      } else {
        line += "  " + std::string(pad, ' ') + row[k];
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace bitext
