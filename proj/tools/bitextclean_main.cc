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

// bitextclean: command-line front end.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bitextclean/config.h"
#include "bitextclean/corpus_io.h"
#include "bitextclean/doccontext.h"
#include "bitextclean/error.h"
#include "bitextclean/file_util.h"
#include "bitextclean/heuristics.h"
#include "bitextclean/langid.h"
#include "bitextclean/lmfilter.h"
#include "bitextclean/pipeline.h"
#include "bitextclean/subword.h"
#include "bitextclean/textnorm.h"
#include "bitextclean/utf8.h"
#include "bitextclean/wordalign.h"

namespace bitext {
namespace {

class Timer {
 public:
  explicit Timer(std::string what)
      : what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  void Report(size_t lines) const {
    const double s = Seconds();
    std::fprintf(stderr, "[bitextclean] %s: %zu lines in %.3fs (%.0f lines/s)\n",
                 what_.c_str(), lines, s, s > 0 ? lines / s : 0.0);
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
void WriteAtomic(const std::string& path, Fn&& fn) {
  AtomicFile f(path);
  fn(f.stream());
  f.Commit();
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return in;
}

struct Globals {
  std::string config;
  size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  uint64_t seed = 1;
};

// ---- preprocess -----------------------------------------------------------

struct PreprocessArgs {
  std::string input, output, lang = "en", truecaser, contractions;
  bool expand = false;
  bool no_tokenize = false;
};

void Preprocess(const PreprocessArgs& a) {
  Timer t("preprocess");
  const Language lang = ParseLanguage(a.lang);
  std::optional<TruecaseModel> tc;
  if (!a.truecaser.empty()) {
    auto in = OpenInput(a.truecaser);
    tc = TruecaseModel::Load(in);
  }
  std::optional<ContractionTable> table;
  if (a.expand) {
    if (a.contractions.empty()) {
      table.emplace();
    } else {
      auto in = OpenInput(a.contractions);
      table = ContractionTable::FromTsv(in);
    }
  }
  const auto lines = ReadLines(a.input);
  WriteAtomic(a.output, [&](std::ostream& out) {
    for (const auto& line : lines) {
      const std::string norm = Normalize(line);
      std::vector<std::string> tokens = a.no_tokenize
                                            ? utf8::SplitWhitespace(norm)
                                            : Tokenize(norm, lang);
      if (table) tokens = table->Expand(tokens);
      if (tc) tokens = Truecase(tokens, *tc);
      out << utf8::Join(tokens, " ") << '\n';
    }
  });
  t.Report(lines.size());
}

// ---- truecaser / bpe ------------------------------------------------------

void TrainTruecaser(const std::vector<std::string>& inputs,
                    const std::string& model) {
  Timer t("train-truecaser");
  std::vector<std::string> lines;
  for (const auto& p : inputs) {
    auto l = ReadLines(p);
    lines.insert(lines.end(), l.begin(), l.end());
  }
  const TruecaseModel m = TruecaseModel::Train(lines);
  WriteAtomic(model, [&](std::ostream& out) { m.Save(out); });
  t.Report(lines.size());
}

struct LearnBpeArgs {
  std::vector<std::string> inputs;
  std::string output, vocab_output;
  BpeOptions opt;
};

void LearnBpeCmd(const LearnBpeArgs& a) {
  Timer t("learn-bpe");
  std::vector<std::string> lines;
  for (const auto& p : a.inputs) {
    auto l = ReadLines(p);
    lines.insert(lines.end(), l.begin(), l.end());
  }
  const SubwordModel m = LearnBpe(lines, a.opt);
  WriteAtomic(a.output, [&](std::ostream& out) { m.SaveMerges(out); });
  if (!a.vocab_output.empty()) {
    WriteAtomic(a.vocab_output, [&](std::ostream& out) { m.SaveVocab(out); });
  }
  std::fprintf(stderr, "[bitextclean] learn-bpe: %zu merges\n",
               m.merges().size());
  t.Report(lines.size());
}

struct ApplyBpeArgs {
  std::string codes, input, output, vocab, label;
  int64_t vocab_threshold = 0;
  bool glue = false;
};

void ApplyBpeCmd(const ApplyBpeArgs& a) {
  Timer t("apply-bpe");
  auto in = OpenInput(a.codes);
  SubwordModel m = SubwordModel::LoadMerges(in);
  if (!a.vocab.empty()) {
    auto vin = OpenInput(a.vocab);
    m.set_vocab(SubwordModel::LoadVocab(vin));
    m.set_vocab_threshold(a.vocab_threshold);
  }
  const auto lines = ReadLines(a.input);
  const std::string label = a.label.empty() ? "" : DomainLabel{a.label}.token();
  WriteAtomic(a.output, [&](std::ostream& out) {
    for (const auto& line : lines) {
      std::vector<std::string> tokens = utf8::SplitWhitespace(line);
      if (!label.empty()) {
        if (!tokens.empty() && IsReservedToken(tokens[0])) {
          tokens[0] = label;
        } else {
          tokens.insert(tokens.begin(), label);
        }
      }
      const auto pieces =
          a.glue ? PreSegmentCompose(tokens, m) : m.Apply(tokens);
      out << utf8::Join(pieces, " ") << '\n';
    }
  });
  t.Report(lines.size());
}

// ---- langid ---------------------------------------------------------------

struct TrainLangIdArgs {
  std::vector<std::string> langs;  // code=path
  std::string model;
  int min_n = 1, max_n = 3;
  double k = 0.5;
};

void TrainLangIdCmd(const TrainLangIdArgs& a) {
  Timer t("train-langid");
  std::map<std::string, std::vector<std::string>> corpora;
  size_t n = 0;
  for (const auto& spec : a.langs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw CLI::ValidationError("--lang", "expected CODE=PATH, got " + spec);
    }
    auto lines = ReadLines(spec.substr(eq + 1));
    n += lines.size();
    auto& dst = corpora[spec.substr(0, eq)];
    dst.insert(dst.end(), lines.begin(), lines.end());
  }
  const LangIdModel m = LangIdModel::Train(corpora, a.min_n, a.max_n, a.k);
  WriteAtomic(a.model, [&](std::ostream& out) { m.Save(out); });
  t.Report(n);
}

// ---- alignment ------------------------------------------------------------

Sampler ParseSampler(const std::string& s) {
  if (s == "em") return Sampler::kEm;
  if (s == "gibbs") return Sampler::kGibbs;
  throw CLI::ValidationError("--sampler", "must be em or gibbs");
}

struct TrainAlignArgs {
  std::string src, tgt, priors, sampler = "em";
  AlignOptions opt;
};

void TrainAlignCmd(const TrainAlignArgs& a, const Globals& g) {
  Timer t("train-align");
  const Corpus c = ReadParallel(a.src, a.tgt);
  AlignOptions opt = a.opt;
  opt.sampler = ParseSampler(a.sampler);
  opt.seed = g.seed;
  const AlignTrainResult r = TrainAlign(c, opt);
  WriteAtomic(a.priors, [&](std::ostream& out) { r.priors.Save(out); });
  t.Report(c.size());
}

struct ScoreAlignArgs {
  std::string src, tgt, priors, output, sampler = "em";
  double threshold = kDefaultAlignThreshold;
};

void ScoreAlignCmd(const ScoreAlignArgs& a, const Globals& g) {
  Timer t("score-align");
  const Corpus c = ReadParallel(a.src, a.tgt);
  auto in = OpenInput(a.priors);
  const PriorSet priors = PriorSet::Load(in);
  ScoreOptions so;
  so.sampler = ParseSampler(a.sampler);
  so.seed = g.seed;
  const AlignScorer scorer(priors, so);
  const size_t jobs = std::max<size_t>(1, std::min(g.jobs, c.size()));
  std::vector<double> scores(c.size());
  std::vector<std::thread> threads;
  for (size_t j = 0; j < jobs; ++j) {
    threads.emplace_back([&, j] {
      for (size_t i = j; i < c.size(); i += jobs) scores[i] = scorer.Score(c[i]);
    });
  }
  for (auto& th : threads) th.join();
  size_t pass = 0;
  WriteAtomic(a.output, [&](std::ostream& out) {
    char buf[64];
    for (size_t i = 0; i < c.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6f", scores[i]);
      out << c[i].line_no << '\t' << buf << '\n';
      if (AlignFilter(scores[i], a.threshold)) ++pass;
    }
  });
  std::fprintf(stderr, "[bitextclean] score-align: %zu/%zu pass (<= %g)\n",
               pass, c.size(), a.threshold);
  t.Report(c.size());
}

// ---- language models ------------------------------------------------------

struct TrainLmArgs {
  std::vector<std::string> inputs;
  std::string model;
  LmOptions opt;
};

void TrainLmCmd(const TrainLmArgs& a) {
  Timer t("train-lm");
  std::vector<std::string> lines;
  for (const auto& p : a.inputs) {
    auto l = ReadLines(p);
    lines.insert(lines.end(), l.begin(), l.end());
  }
  const NgramModel m = NgramModel::Train(lines, a.opt);
  WriteAtomic(a.model, [&](std::ostream& out) { m.WriteArpa(out); });
  std::fprintf(stderr, "[bitextclean] train-lm: order %d\n", m.order());
  t.Report(lines.size());
}

struct ScoreLmArgs {
  std::string src, tgt, src_model, tgt_model, output, bpe;
};

void ScoreLmCmd(const ScoreLmArgs& a, const Globals& g) {
  Timer t("score-lm");
  const Corpus c = ReadParallel(a.src, a.tgt);
  auto sin = OpenInput(a.src_model);
  const NgramModel qs = NgramModel::ReadArpa(sin);
  auto tin = OpenInput(a.tgt_model);
  const NgramModel qt = NgramModel::ReadArpa(tin);
  std::optional<SubwordModel> bpe;
  if (!a.bpe.empty()) {
    auto bin = OpenInput(a.bpe);
    bpe = SubwordModel::LoadMerges(bin);
  }
  std::vector<CrossEntropyRecord> recs(c.size());
  const size_t jobs = std::max<size_t>(1, std::min(g.jobs, c.size()));
  std::vector<std::thread> threads;
  for (size_t j = 0; j < jobs; ++j) {
    threads.emplace_back([&, j] {
      for (size_t i = j; i < c.size(); i += jobs) {
        SentencePair p = c[i];
        p.src = PrepareLmSide(p.src, bpe ? &*bpe : nullptr, nullptr);
        p.tgt = PrepareLmSide(p.tgt, bpe ? &*bpe : nullptr, nullptr);
        recs[i] = LmFeatures(p, qs, qt);
      }
    });
  }
  for (auto& th : threads) th.join();
  WriteAtomic(a.output, [&](std::ostream& out) {
    for (size_t i = 0; i < c.size(); ++i) {
      out << FormatFeatureRow(c[i].line_no, recs[i]) << '\n';
    }
  });
  t.Report(c.size());
}

// ---- filter / report ------------------------------------------------------

struct FilterArgs {
  std::string src, tgt, boundaries, out_src, out_tgt, out_boundaries;
  std::string rej_src, rej_tgt, report, verdicts, format = "text";
  std::optional<std::string> dataset, mode, src_lang, tgt_lang;
  std::optional<std::string> langid_a, langid_b, priors, lm_src, lm_tgt, bpe;
  std::vector<std::string> disable;
  bool fast = false;
};

void FilterCmd(const FilterArgs& a, const Globals& g, bool jobs_set,
               bool seed_set) {
  PipelineConfig cfg;
  if (!g.config.empty()) {
    cfg = PipelineConfigFromIni(IniConfig::Load(g.config));
  } else {
    cfg = PresetConfig(a.dataset.value_or("other"),
                       ParseFilterMode(a.mode.value_or("strict")));
  }
  if (a.dataset && !g.config.empty()) {
    const PipelineConfig preset = PresetConfig(*a.dataset, cfg.mode);
    cfg.dataset = preset.dataset;
    cfg.heuristics = preset.heuristics;
  }
  if (a.mode) cfg.mode = ParseFilterMode(*a.mode);
  if (a.fast) cfg.fast = true;
  if (jobs_set || g.config.empty()) cfg.jobs = g.jobs;
  if (seed_set) cfg.seed = g.seed;
  if (a.src_lang) cfg.src_lang = *a.src_lang;
  if (a.tgt_lang) cfg.tgt_lang = *a.tgt_lang;
  if (a.langid_a) cfg.langid_a_path = *a.langid_a;
  if (a.langid_b) cfg.langid_b_path = *a.langid_b;
  if (a.priors) cfg.priors_path = *a.priors;
  if (a.lm_src) cfg.lm_src_path = *a.lm_src;
  if (a.lm_tgt) cfg.lm_tgt_path = *a.lm_tgt;
  if (a.bpe) cfg.bpe_path = *a.bpe;
  for (const auto& s : a.disable) {
    switch (ParseStage(s)) {
      case Stage::kHeuristics: cfg.heuristics_enabled = false; break;
      case Stage::kLangId: cfg.langid_enabled = false; break;
      case Stage::kWordAlign: cfg.wordalign_enabled = false; break;
      case Stage::kLmFilter: cfg.lm_enabled = false; break;
    }
  }
  if (!a.verdicts.empty()) cfg.keep_verdicts = true;
  const PipelineModels models = LoadModels(cfg);

  Timer t("filter");
  const Corpus c = ReadParallel(
      a.src, a.tgt,
      a.boundaries.empty() ? std::nullopt : std::optional(a.boundaries));
  const PipelineResult r = RunPipeline(c, cfg, models);
  for (Stage s : cfg.order) {
    if (!cfg.Enabled(s)) continue;
    const double sec = r.stage_seconds[static_cast<int>(s)];
    std::fprintf(stderr, "[bitextclean] stage %s: %.3fs (%.0f lines/s)\n",
                 StageName(s), sec, sec > 0 ? c.size() / sec : 0.0);
  }
  WriteParallel(r.kept, a.out_src, a.out_tgt,
                a.out_boundaries.empty() ? std::nullopt
                                         : std::optional(a.out_boundaries));
  if (!a.rej_src.empty() && !a.rej_tgt.empty()) {
    WriteParallel(r.rejected, a.rej_src, a.rej_tgt);
  }
  if (!a.report.empty()) {
    WriteAtomic(a.report, [&](std::ostream& out) { r.report.Save(out); });
  }
  if (!a.verdicts.empty()) {
    WriteAtomic(a.verdicts, [&](std::ostream& out) {
      char buf[64];
      for (const auto& v : r.report.verdicts) {
        out << v.line_no << '\t';
        std::string keys;
        for (size_t i = 0; i < kNumFilters; ++i) {
          if (!v.Rejected(static_cast<FilterId>(i))) continue;
          if (!keys.empty()) keys += ',';
          keys += FilterKey(static_cast<FilterId>(i));
        }
        out << (keys.empty() ? "pass" : keys);
        if (v.align_score) {
          std::snprintf(buf, sizeof(buf), "\talign=%.4f", *v.align_score);
          out << buf;
        }
        if (v.lm) {
          std::snprintf(buf, sizeof(buf), "\tlm_avg=%.4f\tlm_diff=%.4f",
                        v.lm->avg, v.lm->absdiff);
          out << buf;
        }
        out << '\n';
      }
    });
  }
  std::cout << RenderReport({r.report}, a.format == "tsv" ? ReportFormat::kTsv
                                                          : ReportFormat::kText);
  t.Report(c.size());
}

void ReportCmd(const std::vector<std::string>& inputs,
               const std::vector<std::string>& labels,
               const std::string& format, const std::string& output) {
  std::vector<FilterReport> cols;
  for (size_t i = 0; i < inputs.size(); ++i) {
    auto in = OpenInput(inputs[i]);
    cols.push_back(FilterReport::Load(in));
    if (i < labels.size()) cols.back().label = labels[i];
  }
  const std::string text = RenderReport(
      cols, format == "tsv" ? ReportFormat::kTsv : ReportFormat::kText);
  if (output.empty()) {
    std::cout << text;
  } else {
    WriteFileAtomic(output, text);
  }
}

// ---- documents ------------------------------------------------------------

struct DocArgs {
  std::string src, tgt, boundaries, out_src, out_tgt, out_boundaries;
  std::string scheme = "2+1", brk = "<BRK>";
  std::string extract_input, extract_output;
};

void DocConcatCmd(const DocArgs& a) {
  Timer t("doc-concat");
  ContextScheme scheme = ContextScheme::Parse(a.scheme);
  scheme.break_token = a.brk;
  if (!a.extract_input.empty()) {
    const auto lines = ReadLines(a.extract_input);
    std::vector<std::string> out;
    out.reserve(lines.size());
    for (const auto& l : lines) out.push_back(ExtractCurrent(l, scheme));
    WriteLinesAtomic(a.extract_output, out);
    t.Report(lines.size());
    return;
  }
  if (a.src.empty() || a.tgt.empty() || a.out_src.empty() ||
      a.out_tgt.empty()) {
    throw CLI::ValidationError(
        "doc-concat", "--src, --tgt, --out-src and --out-tgt are required");
  }
  const Corpus c = ReadParallel(
      a.src, a.tgt,
      a.boundaries.empty() ? std::nullopt : std::optional(a.boundaries));
  const Corpus out = BuildContext(c, scheme);
  WriteParallel(out, a.out_src, a.out_tgt,
                a.out_boundaries.empty() ? std::nullopt
                                         : std::optional(a.out_boundaries));
  t.Report(c.size());
}

void ShuffleDocsCmd(const DocArgs& a, const Globals& g) {
  Timer t("shuffle-docs");
  const Corpus c = ReadParallel(
      a.src, a.tgt,
      a.boundaries.empty() ? std::nullopt : std::optional(a.boundaries));
  const Corpus out = ShuffleDocs(c, g.seed);
  WriteParallel(out, a.out_src, a.out_tgt);
  t.Report(c.size());
}

int Run(int argc, char** argv) {
  CLI::App app{"Parallel corpus preprocessing and filtering."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Globals g;
  auto* config_opt =
      app.add_option("--config", g.config, "INI configuration file");
  auto* jobs_opt = app.add_option("--jobs", g.jobs, "Worker threads")
                       ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  (void)config_opt;
  app.fallthrough();

  PreprocessArgs pp;
  auto* c_pre = app.add_subcommand(
      "preprocess", "Normalize, tokenize, optionally expand and truecase");
  c_pre->add_option("-i,--input", pp.input, "Input text")->required();
  c_pre->add_option("-o,--output", pp.output, "Output text")->required();
  c_pre->add_option("--lang", pp.lang, "Language code (en, de, fi, ...)");
  c_pre->add_option("--truecaser", pp.truecaser, "Truecaser model to apply");
  c_pre->add_flag("--expand-contractions", pp.expand, "Expand clitics");
  c_pre->add_option("--contractions", pp.contractions,
                    "Contraction table TSV (default: built-in)");
  c_pre->add_flag("--no-tokenize", pp.no_tokenize, "Normalize only");

  std::vector<std::string> tc_inputs;
  std::string tc_model;
  auto* c_tc = app.add_subcommand("train-truecaser", "Train a truecaser");
  c_tc->add_option("-i,--input", tc_inputs, "Tokenized text")->required();
  c_tc->add_option("-m,--model", tc_model, "Output model")->required();

  LearnBpeArgs lb;
  auto* c_lb = app.add_subcommand("learn-bpe", "Learn BPE merges");
  c_lb->add_option("-i,--input", lb.inputs, "Tokenized text")->required();
  c_lb->add_option("-o,--output", lb.output, "Merge file")->required();
  // Defined first so that explicit --merges/--min-frequency win.
  c_lb->add_option_function<std::string>(
          "--recipe", [&lb](const std::string& r) { lb.opt = BpeRecipe(r); },
          "Named setting: ende, enfi or bpe50k")
      ->check(CLI::IsMember({"ende", "enfi", "bpe50k"}));
  c_lb->add_option("--merges", lb.opt.num_merges, "Number of merges")
      ->check(CLI::NonNegativeNumber);
  c_lb->add_option("--min-frequency", lb.opt.min_frequency,
                   "Stop when the best pair is rarer");
  c_lb->add_option("--vocab-output", lb.vocab_output, "Vocabulary file");

  ApplyBpeArgs ab;
  auto* c_ab = app.add_subcommand("apply-bpe", "Segment text with BPE");
  c_ab->add_option("-c,--codes", ab.codes, "Merge file")->required();
  c_ab->add_option("-i,--input", ab.input, "Tokenized text")->required();
  c_ab->add_option("-o,--output", ab.output, "Segmented text")->required();
  c_ab->add_option("--vocab", ab.vocab, "Vocabulary file");
  c_ab->add_option("--vocab-threshold", ab.vocab_threshold,
                   "Re-split pieces rarer than this");
  c_ab->add_flag("--glue", ab.glue, "Input is morph-segmented with glue marks");
  c_ab->add_option("--label", ab.label, "Domain label, e.g. NEWS, EP, WEB");

  TrainLangIdArgs tl;
  auto* c_tl = app.add_subcommand("train-langid", "Train a language identifier");
  c_tl->add_option("--lang", tl.langs, "CODE=PATH, repeatable")->required();
  c_tl->add_option("-m,--model", tl.model, "Output model")->required();
  c_tl->add_option("--min-n", tl.min_n, "Smallest n-gram");
  c_tl->add_option("--max-n", tl.max_n, "Largest n-gram");
  c_tl->add_option("--k", tl.k, "Additive smoothing");

  TrainAlignArgs ta;
  auto* c_ta = app.add_subcommand("train-align", "Train alignment priors");
  c_ta->add_option("--src", ta.src, "Clean source")->required();
  c_ta->add_option("--tgt", ta.tgt, "Clean target")->required();
  c_ta->add_option("-o,--priors", ta.priors, "Output priors")->required();
  c_ta->add_option("--iters-ibm1", ta.opt.iters_ibm1, "IBM1 iterations");
  c_ta->add_option("--iters-hmm", ta.opt.iters_hmm, "HMM iterations");
  c_ta->add_option("--sampler", ta.sampler, "em or gibbs");
  c_ta->add_option("--alpha", ta.opt.alpha, "Prior smoothing");
  c_ta->add_flag("--fertility", ta.opt.fertility, "Collect fertilities");

  ScoreAlignArgs sa;
  auto* c_sa = app.add_subcommand("score-align", "Score pairs with priors");
  c_sa->add_option("--src", sa.src, "Source")->required();
  c_sa->add_option("--tgt", sa.tgt, "Target")->required();
  c_sa->add_option("-p,--priors", sa.priors, "Priors file")->required();
  c_sa->add_option("-o,--output", sa.output, "Scores TSV")->required();
  c_sa->add_option("--sampler", sa.sampler, "em or gibbs");
  c_sa->add_option("--threshold", sa.threshold, "Pass iff score <= threshold");

  TrainLmArgs tm;
  auto* c_tm = app.add_subcommand("train-lm", "Train an n-gram LM");
  c_tm->add_option("-i,--input", tm.inputs, "Segmented text")->required();
  c_tm->add_option("-m,--model", tm.model, "Output ARPA file")->required();
  c_tm->add_option("--order", tm.opt.max_order, "Maximum order");
  c_tm->add_option("--threshold", tm.opt.grow_threshold, "Growth threshold");

  ScoreLmArgs sl;
  auto* c_sl = app.add_subcommand("score-lm", "Cross-entropy features");
  c_sl->add_option("--src", sl.src, "Source")->required();
  c_sl->add_option("--tgt", sl.tgt, "Target")->required();
  c_sl->add_option("--src-model", sl.src_model, "Source ARPA")->required();
  c_sl->add_option("--tgt-model", sl.tgt_model, "Target ARPA")->required();
  c_sl->add_option("-o,--output", sl.output, "Features TSV")->required();
  c_sl->add_option("--bpe", sl.bpe, "Merge file to segment input");

  FilterArgs fa;
  auto* c_f = app.add_subcommand(
      "filter",
      "Run the filter cascade. Defaults: strict LM avg CE <= 13, diff <= 4; "
      "relaxed 15 and 5; alignment score <= 7; language id probability "
      ">= 0.9 from both models; max 100 words, words under 40 characters.");
  c_f->add_option("--src", fa.src, "Source")->required();
  c_f->add_option("--tgt", fa.tgt, "Target")->required();
  c_f->add_option("--boundaries", fa.boundaries, "Document boundaries");
  c_f->add_option("--out-src", fa.out_src, "Kept source")->required();
  c_f->add_option("--out-tgt", fa.out_tgt, "Kept target")->required();
  c_f->add_option("--out-boundaries", fa.out_boundaries, "Kept boundaries");
  c_f->add_option("--rejected-src", fa.rej_src, "Rejected source");
  c_f->add_option("--rejected-tgt", fa.rej_tgt, "Rejected target");
  c_f->add_option("--report", fa.report, "Report file");
  c_f->add_option("--verdicts", fa.verdicts, "Per-line verdict TSV");
  c_f->add_option("--format", fa.format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  c_f->add_option("--dataset", fa.dataset,
                  "commoncrawl, paracrawl, rapid, wikititles, other, ...");
  c_f->add_option("--mode", fa.mode, "strict or relaxed");
  c_f->add_flag("--fast", fa.fast, "Stop at the first rejecting stage");
  c_f->add_option("--src-lang", fa.src_lang, "Expected source language");
  c_f->add_option("--tgt-lang", fa.tgt_lang, "Expected target language");
  c_f->add_option("--langid-a", fa.langid_a, "First language id model");
  c_f->add_option("--langid-b", fa.langid_b, "Second language id model");
  c_f->add_option("--priors", fa.priors, "Alignment priors");
  c_f->add_option("--lm-src", fa.lm_src, "Source ARPA");
  c_f->add_option("--lm-tgt", fa.lm_tgt, "Target ARPA");
  c_f->add_option("--bpe", fa.bpe, "Merge file for LM input");
  c_f->add_option("--disable", fa.disable, "Stage to disable, repeatable");

  std::vector<std::string> rp_inputs, rp_labels;
  std::string rp_format = "text", rp_output;
  auto* c_rp = app.add_subcommand("report", "Render saved reports side by side");
  c_rp->add_option("-i,--input", rp_inputs, "Report files")->required();
  c_rp->add_option("--label", rp_labels, "Column labels");
  c_rp->add_option("--format", rp_format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  c_rp->add_option("-o,--output", rp_output, "Output (default stdout)");

  DocArgs da;
  auto* c_dc = app.add_subcommand("doc-concat", "Build document-context data");
  c_dc->add_option("--src", da.src, "Source");
  c_dc->add_option("--tgt", da.tgt, "Target");
  c_dc->add_option("--boundaries", da.boundaries, "Document boundaries");
  c_dc->add_option("--out-src", da.out_src, "Output source");
  c_dc->add_option("--out-tgt", da.out_tgt, "Output target");
  c_dc->add_option("--out-boundaries", da.out_boundaries, "Output boundaries");
  c_dc->add_option("--scheme", da.scheme, "2+1, 3+1a, 3+1b, 1t+1s+1, 2+2")
      ->check(CLI::IsMember({"2+1", "3+1a", "3+1b", "1t+1s+1", "2+2"}));
  c_dc->add_option("--break-token", da.brk, "Segment separator");
  auto* ex_in = c_dc->add_option("--extract-current", da.extract_input,
                                 "Keep the last segment of each line");
  c_dc->add_option("--extract-output", da.extract_output,
                   "Output for --extract-current")
      ->needs(ex_in);
  ex_in->needs("--extract-output");

  DocArgs sd;
  auto* c_sd = app.add_subcommand("shuffle-docs", "Shuffle pairs across docs");
  c_sd->add_option("--src", sd.src, "Source")->required();
  c_sd->add_option("--tgt", sd.tgt, "Target")->required();
  c_sd->add_option("--boundaries", sd.boundaries, "Document boundaries");
  c_sd->add_option("--out-src", sd.out_src, "Output source")->required();
  c_sd->add_option("--out-tgt", sd.out_tgt, "Output target")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_pre->parsed()) Preprocess(pp);
    if (c_tc->parsed()) TrainTruecaser(tc_inputs, tc_model);
    if (c_lb->parsed()) LearnBpeCmd(lb);
    if (c_ab->parsed()) ApplyBpeCmd(ab);
    if (c_tl->parsed()) TrainLangIdCmd(tl);
    if (c_ta->parsed()) TrainAlignCmd(ta, g);
    if (c_sa->parsed()) ScoreAlignCmd(sa, g);
    if (c_tm->parsed()) TrainLmCmd(tm);
    if (c_sl->parsed()) ScoreLmCmd(sl, g);
    if (c_f->parsed()) FilterCmd(fa, g, jobs_opt->count() > 0,
                                 seed_opt->count() > 0);
    if (c_rp->parsed()) ReportCmd(rp_inputs, rp_labels, rp_format, rp_output);
    if (c_dc->parsed()) DocConcatCmd(da);
    if (c_sd->parsed()) ShuffleDocsCmd(sd, g);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "bitextclean: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "bitextclean: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bitextclean: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace bitext

int main(int argc, char** argv) { return bitext::Run(argc, argv); }
