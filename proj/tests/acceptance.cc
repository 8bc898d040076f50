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


// Acceptance checks. One line per criterion; exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bitextclean/doccontext.h"
#include "bitextclean/heuristics.h"
#include "bitextclean/langid.h"
#include "bitextclean/lmfilter.h"
#include "bitextclean/pipeline.h"
#include "bitextclean/subword.h"
#include "bitextclean/utf8.h"
#include "bitextclean/wordalign.h"
#include "testlib.h"

namespace bitext {
namespace {

// Collects the first few failed expectations of one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void Near(double a, double b, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": " << a << " vs " << b;
    Expect(std::fabs(a - b) <= tol, s.str());
  }
  void Note(const std::string& s) { info_ = s; }

  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string out = info_;
    if (failed_) {
      out += (out.empty() ? "" : "; ") + std::to_string(failed_) + "/" +
             std::to_string(total_) + " checks failed";
      for (const auto& n : notes_) out += "; " + n;
    }
    return out;
  }

 private:
  size_t total_ = 0, failed_ = 0;
  std::vector<std::string> notes_;
  std::string info_;
};

using Lines = std::vector<std::string>;
using StringPairs = std::vector<std::pair<std::string, std::string>>;

Corpus ToCorpus(const StringPairs& pairs) {
  Lines s, t;
  for (const auto& [a, b] : pairs) {
    s.push_back(a);
    t.push_back(b);
  }
  return Corpus::FromLines(s, t);
}

// ---- 1 -------------------------------------------------------------------

void DefaultsSnapshot(Checks& c) {
  const std::map<std::string, double> ratio = {
      {"commoncrawl", 3}, {"paracrawl", 3}, {"rapid", 3}, {"wikititles", 2},
      {"europarl", 9},    {"newscommentary", 9}, {"other", 9}};
  for (const auto& [name, r] : ratio) {
    HeuristicConfig h = DefaultHeuristicConfig(name);
    c.Expect(h.max_len_ratio == r, name + " max_len_ratio");
    c.Expect(h.max_words == 100, name + " max_words");
    c.Expect(h.max_word_chars == 40, name + " max_word_chars");
    PipelineConfig p = PresetConfig(name, FilterMode::kStrict);
    c.Expect(p.heuristics.max_len_ratio == r, name + " preset ratio");
    c.Expect(p.langid_reliability == 0.9, name + " reliability");
    c.Expect(p.align_threshold == 7.0, name + " align threshold");
  }
  for (const char* name : {"commoncrawl", "paracrawl", "rapid"}) {
    c.Expect(DefaultHeuristicConfig(name).min_words == 4,
             std::string(name) + " min_words");
  }
  c.Expect(kDefaultReliability == 0.9, "kDefaultReliability");
  c.Expect(kDefaultAlignThreshold == 7.0, "kDefaultAlignThreshold");
  LmThresholds s = ThresholdsFor(FilterMode::kStrict);
  LmThresholds r = ThresholdsFor(FilterMode::kRelaxed);
  c.Expect(s.avg == 13 && s.diff == 4, "strict 13/4");
  c.Expect(r.avg == 15 && r.diff == 5, "relaxed 15/5");
  c.Expect(BpeRecipe("ende").num_merges == 35000, "ende merges");
  c.Expect(BpeRecipe("enfi").num_merges == 37000, "enfi merges");
  c.Expect(BpeRecipe("bpe50k").num_merges == 50000, "segmentation merges");
  c.Expect(BpeRecipe("bpe50k").vocab_threshold == 50, "segmentation freq");
  LmOptions lm;
  c.Expect(lm.max_order == 20, "lm max_order");
  c.Expect(lm.grow_threshold == 0.002, "lm grow_threshold");
}

// ---- 2 -------------------------------------------------------------------

void HeuristicPrecisionRecall(Checks& c) {
  testing::InjectedCorpus inj = testing::MakeInjectedCorpus(1000, 7);
  HeuristicConfig cfg = DefaultHeuristicConfig("commoncrawl");
  std::vector<HeuristicOutcome> out;
  for (const auto& p : inj.corpus.pairs()) out.push_back(CheckPair(p, cfg));
  std::string worst;
  for (size_t r = 0; r < kNumHeuristicRules; ++r) {
    const auto rule = static_cast<HeuristicRule>(r);
    size_t tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < out.size(); ++i) {
      const bool gold = inj.label[i] && *inj.label[i] == rule;
      const bool pred = out[i].Rejected(rule);
      tp += gold && pred;
      fp += !gold && pred;
      fn += gold && !pred;
    }
    const std::string name(RuleName(rule));
    c.Expect(tp > 0, name + " has injected lines");
    c.Expect(fp == 0, name + " precision < 1");
    c.Expect(fn == 0, name + " recall < 1");
  }
  c.Note(std::to_string(kNumHeuristicRules) + " rules, P=R=1 required");
}

// ---- 3 -------------------------------------------------------------------

void StatisticsConsistency(Checks& c, const testing::ToyModels& toy) {
  PipelineModels models = testing::ToyPipelineModels(toy);
  for (size_t n : {1000u, 10000u}) {
    Corpus in = testing::MakePipelineFixture(n, 6 + n);
    PipelineConfig cfg = testing::ToyPipelineConfig(FilterMode::kStrict);
    PipelineResult r = RunPipeline(in, cfg, models);
    std::vector<size_t> per(kNumFilters, 0);
    std::set<size_t> uni;
    for (const auto& p : in.pairs()) {
      PairVerdict v = EvaluatePair(p, cfg, models);
      for (size_t f = 0; f < kNumFilters; ++f) {
        if (v.Rejected(static_cast<FilterId>(f))) {
          ++per[f];
          uni.insert(p.line_no);
        }
      }
    }
    const std::string tag = std::to_string(n) + " lines: ";
    c.Expect(r.report.input == n, tag + "input count");
    c.Expect(r.report.total_rejected == uni.size(), tag + "total != union");
    c.Expect(r.kept.size() + r.rejected.size() == n, tag + "kept + rejected");
    c.Expect(r.rejected.size() == uni.size(), tag + "rejected corpus size");
    for (size_t f = 0; f < kNumFilters; ++f) {
      const std::string key = FilterKey(static_cast<FilterId>(f));
      c.Expect(r.report.rejects[f] == per[f], tag + key + " count");
      const double brute = 100.0 * static_cast<double>(per[f]) / static_cast<double>(n);
      c.Expect(r.report.Percent(r.report.rejects[f]) == brute, tag + key + " percent");
    }
    const double total = 100.0 * static_cast<double>(uni.size()) / static_cast<double>(n);
    c.Expect(r.report.Percent(r.report.total_rejected) == total, tag + "total percent");
  }
}

// ---- 4 -------------------------------------------------------------------

void BpeOracle(Checks& c) {
  const std::vector<std::pair<std::string, int64_t>> toy = {
      {"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}};
  const std::map<std::string, int64_t> counts(toy.begin(), toy.end());
  // Worked by hand: es (9), est (9), est</w> (9), lo (7), low (7).
  const std::vector<MergePair> hand = {
      {"e", "s"}, {"es", "t"}, {"est", "</w>"}, {"l", "o"}, {"lo", "w"}};
  BpeOptions o;
  o.num_merges = 5;
  c.Expect(LearnBpeFromCounts(toy, o).merges() == hand, "hand-run merge order");
  for (int n = 0; n <= 12; ++n) {
    o.num_merges = n;
    c.Expect(LearnBpeFromCounts(toy, o).merges() ==
                 testing::ReferenceBpe(counts, n, o.min_frequency),
             "greedy oracle at " + std::to_string(n) + " merges");
  }

  std::mt19937_64 rng(41);
  Lines train;
  for (int i = 0; i < 2000; ++i) train.push_back(testing::RandomSentence(rng, 10));
  o.num_merges = 500;
  SubwordModel m = LearnBpe(train, o);
  size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    auto toks = utf8::SplitWhitespace(testing::RandomSentence(rng, 1 + rng() % 15, 1, 14));
    if (i % 7 == 0) toks.push_back("\xC3\xA4\xC3\xB6z");
    bad += Unsegment(m.Apply(toks)) != toks;
  }
  c.Expect(bad == 0, std::to_string(bad) + " round-trip failures");
  c.Note("10000 lines round-tripped");
}

// ---- 5 -------------------------------------------------------------------

void RowsNormalized(Checks& c, const AlignModel& m, const std::string& tag) {
  std::set<int> rows;
  for (const auto& [k, p] : m.table()) rows.insert(static_cast<int>(k >> 32));
  for (int e : rows) {
    if (e == Vocab::kUnk) continue;
    c.Near(m.RowSum(e), 1.0, 1e-6, tag + " row " + m.e_vocab.Word(e));
  }
  double j = 0;
  for (double p : m.jump) j += p;
  c.Near(j, 1.0, 1e-6, tag + " jump row");
}

void AlignEm(Checks& c) {
  const StringPairs toy = {
      {"das haus", "the house"}, {"das buch", "the book"}, {"ein buch", "a book"}};
  Vocab ev, fv;
  std::vector<std::vector<int>> e, f;
  for (const auto& [s, t] : toy) {
    std::vector<int> a, b;
    for (const auto& w : utf8::SplitWhitespace(s)) a.push_back(ev.Add(w));
    for (const auto& w : utf8::SplitWhitespace(t)) b.push_back(fv.Add(w));
    e.push_back(a);
    f.push_back(b);
  }
  std::vector<double> ll, oracle_ll;
  AlignModel m = TrainIbm1(e, f, ev, fv, 20, &ll);
  auto oracle = testing::ReferenceIbm1(toy, 20, &oracle_ll);
  for (size_t i = 1; i < ll.size(); ++i) {
    c.Expect(ll[i] >= ll[i - 1] - 1e-9, "IBM1 LL drops at " + std::to_string(i));
  }
  c.Expect(ll.size() == oracle_ll.size(), "IBM1 log length");
  for (size_t i = 0; i < std::min(ll.size(), oracle_ll.size()); ++i) {
    c.Near(ll[i], oracle_ll[i], 1e-9, "IBM1 LL vs oracle");
  }
  const double book = oracle.at("buch").at("book");
  c.Expect(book > 0.9, "oracle t(book|buch) <= 0.9");
  c.Near(m.T(ev.Find("buch"), fv.Find("book")), book, 1e-9, "t(book|buch)");
  RowsNormalized(c, m, "IBM1");

  std::vector<double> hll;
  TrainHmmEm(e, f, 10, &m, &hll);
  for (size_t i = 1; i < hll.size(); ++i) {
    c.Expect(hll[i] >= hll[i - 1] - 1e-9, "HMM LL drops at " + std::to_string(i));
  }
  RowsNormalized(c, m, "HMM");

  std::ostringstream s;
  s << "t(book|buch)=" << m.T(ev.Find("buch"), fv.Find("book"));
  c.Note(s.str());
}

// ---- 6 -------------------------------------------------------------------

void AlignDiscriminates(Checks& c) {
  auto pairs = testing::SubstitutionCorpus(500, 17);
  AlignTrainResult trained = TrainAlign(ToCorpus(pairs), AlignOptions{});
  AlignScorer scorer(trained.priors);
  std::vector<size_t> perm(pairs.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937_64 rng(18);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> truth, shuffled;
  for (size_t i = 0; i < pairs.size(); ++i) {
    truth.push_back(scorer.Score({pairs[i].first, pairs[i].second}));
    // A fixed point would be a true pair under another name.
    const size_t j = perm[i] == i ? (i + 1) % pairs.size() : perm[i];
    shuffled.push_back(scorer.Score({pairs[i].first, pairs[j].second}));
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  std::vector<double> sorted = shuffled;
  std::sort(sorted.begin(), sorted.end());
  const size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  size_t below = 0;
  for (double t : truth) below += t < median;
  const double frac = static_cast<double>(below) / static_cast<double>(truth.size());
  c.Expect(mean(truth) < mean(shuffled), "mean true >= mean shuffled");
  c.Expect(frac >= 0.95, "fraction below shuffled median < 0.95");
  char buf[128];
  std::snprintf(buf, sizeof buf, "mean %.3f vs %.3f, %.1f%% below median %.3f",
                mean(truth), mean(shuffled), 100 * frac, median);
  c.Note(buf);
}

// ---- 7 -------------------------------------------------------------------

Lines RandomLmCorpus(uint64_t seed, int lines, int vocab, int max_len) {
  std::mt19937_64 rng(seed);
  Lines out;
  for (int i = 0; i < lines; ++i) {
    std::string l;
    const int n = static_cast<int>(rng() % (max_len + 1));
    for (int k = 0; k < n; ++k) {
      const int w = static_cast<int>(vocab * std::pow((rng() % 1000) / 1000.0, 2));
      l += (k ? " w" : "w") + std::to_string(w);
    }
    out.push_back(l);
  }
  return out;
}

Lines Words(const NgramModel& m, const std::vector<int>& ids) {
  Lines out;
  for (int id : ids) out.push_back(m.Word(id));
  return out;
}

void KnOracle(Checks& c) {
  size_t compared = 0;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    for (int order : {2, 3}) {
      Lines corpus = RandomLmCorpus(seed * 10 + order, 60, 10 + 4 * seed, 12);
      size_t tokens = 0;
      for (const auto& l : corpus) tokens += utf8::SplitWhitespace(l).size();
      c.Expect(tokens <= 1000, "fixture over 1000 tokens");
      LmOptions o;
      o.max_order = order;
      o.grow_threshold = 0;
      NgramModel m = NgramModel::Train(corpus, o);
      testing::ReferenceKn ref(corpus, order);
      auto contexts = m.Contexts();
      contexts.push_back({});
      for (const auto& ctx : contexts) {
        for (const auto& w : ref.vocab()) {
          c.Near(m.Prob(Words(m, ctx), w), ref.Prob(Words(m, ctx), w), 1e-9,
                 "order " + std::to_string(order) + " p(" + w + ")");
          ++compared;
        }
      }
      for (const auto& w : ref.vocab()) {
        c.Near(m.Prob({"w0", "unseen"}, w), ref.Prob({"w0", "unseen"}, w), 1e-9,
               "unseen context p(" + w + ")");
      }
    }
  }
  size_t contexts = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Lines corpus = RandomLmCorpus(100 + seed, 80, 20, 10);
    LmOptions o;
    o.max_order = 2 + static_cast<int>(seed % 5);
    o.grow_threshold = seed % 2 ? 0.0 : 0.002;
    NgramModel m = NgramModel::Train(corpus, o);
    for (const auto& ctx : m.Contexts()) {
      double s = 0;
      for (int w : m.PredictableIds()) s += std::exp(m.LogProb(ctx, w));
      c.Near(s, 1.0, 1e-6, "context normalization");
      ++contexts;
    }
  }
  c.Note(std::to_string(compared) + " probabilities, " + std::to_string(contexts) +
         " contexts");
}

// ---- 8 -------------------------------------------------------------------

void LmFeatureArithmetic(Checks& c) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng), b = u(rng);
    CrossEntropyRecord r = MakeCrossEntropyRecord(a, b);
    c.Expect(r.h_src == a && r.h_tgt == b, "inputs kept");
    c.Expect(r.avg == (a + b) / 2, "avg");
    c.Expect(r.max == std::max(a, b), "max");
    c.Expect(r.absdiff == std::fabs(a - b), "absdiff");
  }
  size_t grid = 0;
  const LmThresholds st = ThresholdsFor(FilterMode::kStrict);
  for (int i = 0; i <= 160; ++i) {
    for (int j = 0; j <= 160; ++j) {
      const double avg = i * 0.125, diff = j * 0.0625;
      const double a = avg - diff / 2, b = avg + diff / 2;
      CrossEntropyRecord r = MakeCrossEntropyRecord(a, b);
      const bool strict = LmFilter(r, FilterMode::kStrict).pass;
      const bool relaxed = LmFilter(r, FilterMode::kRelaxed).pass;
      c.Expect(!strict || relaxed, "strict pass rejected by relaxed");
      c.Expect(strict == (r.avg <= st.avg && r.absdiff <= st.diff), "strict rule");
      // Loosening either threshold never turns a pass into a reject.
      for (const LmThresholds& looser :
           {LmThresholds{st.avg + 1, st.diff}, LmThresholds{st.avg, st.diff + 1}}) {
        c.Expect(!strict || LmFilter(r, looser).pass, "threshold monotonicity");
      }
      ++grid;
    }
  }
  c.Note("10000 random pairs, " + std::to_string(grid) + " grid points");
}

// ---- 9 -------------------------------------------------------------------

void LangIdGateCheck(Checks& c) {
  const Lines langs = testing::SyntheticLanguageNames();
  std::mt19937_64 rng(9);
  std::map<std::string, Lines> train;
  std::vector<std::pair<std::string, std::string>> held;
  for (const auto& l : langs) {
    for (int i = 0; i < 5000; ++i) {
      train[l].push_back(testing::SyntheticLine(l, rng, 1 + static_cast<int>(rng() % 15)));
    }
    for (int i = 0; i < 1000; ++i) {
      held.emplace_back(l, testing::SyntheticLine(l, rng, 5 + static_cast<int>(rng() % 10)));
    }
  }
  LangIdModel a = LangIdModel::Train(train, 1, 3, 0.5);
  LangIdModel b = LangIdModel::Train(train, 2, 4, 0.5);
  size_t ok_a = 0, ok_b = 0;
  for (const auto& [lang, line] : held) {
    ok_a += a.Classify(line).lang == lang;
    ok_b += b.Classify(line).lang == lang;
  }
  const double acc_a = static_cast<double>(ok_a) / held.size();
  const double acc_b = static_cast<double>(ok_b) / held.size();
  c.Expect(acc_a >= 0.98, "accuracy of 1-3 model");
  c.Expect(acc_b >= 0.98, "accuracy of 2-4 model");

  // Gate = conjunction of four reliable, matching verdicts.
  const std::vector<double> ths = {0.0, 0.5, 0.9, 0.99, 0.999, 1.0};
  std::mt19937_64 pick(10);
  for (int i = 0; i < 300; ++i) {
    const std::string& ls = langs[pick() % 3];
    const std::string& lt = langs[pick() % 3];
    const int ws = 1 + static_cast<int>(pick() % 6), wt = 1 + static_cast<int>(pick() % 6);
    SentencePair p{testing::SyntheticLine(ls, pick, ws), testing::SyntheticLine(lt, pick, wt)};
    bool prev = true;
    for (double th : ths) {
      auto good = [&](const LangIdModel& m, const std::string& text, const char* want) {
        LangVerdict v = m.Classify(text, th);
        return v.lang == want && v.prob >= th;
      };
      const bool src = good(a, p.src, "xa") && good(b, p.src, "xa");
      const bool tgt = good(a, p.tgt, "xb") && good(b, p.tgt, "xb");
      GateResult g = LangIdGate(p, "xa", "xb", a, b, th);
      c.Expect(g.src_ok == src && g.tgt_ok == tgt, "side verdicts");
      c.Expect(g.pass == (src && tgt), "gate is not the conjunction");
      c.Expect(g.pass == LangIdGate(p, "xa", "xb", b, a, th).pass, "model order");
      c.Expect(prev || !g.pass, "pass at a higher threshold only");
      if (ls != "xa" || lt != "xb") c.Expect(!g.pass || th == 0.0, "wrong language passes");
      prev = g.pass;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "accuracy %.4f (1-3), %.4f (2-4)", acc_a, acc_b);
  c.Note(buf);
}

// ---- 10 ------------------------------------------------------------------

void DocContext(Checks& c) {
  std::mt19937_64 rng(10);
  std::vector<SentencePair> pairs;
  std::vector<std::pair<std::string, size_t>> docs;
  for (size_t d = 0; d < 1000; ++d) {
    const size_t n = 1 + rng() % 6;
    docs.emplace_back("doc" + std::to_string(d), n);
    for (size_t i = 0; i < n; ++i) {
      SentencePair p;
      const std::string tag = std::to_string(d) + "." + std::to_string(i);
      p.src = "s" + tag + " " + testing::RandomWord(rng, 2, 6);
      p.tgt = "t" + tag + " " + testing::RandomWord(rng, 2, 6);
      p.line_no = pairs.size();
      pairs.push_back(p);
    }
  }
  Corpus in = Corpus::WithDocuments(std::move(pairs), docs);
  // Every "<s|t><doc>.<pos>" tag in a line must name the line's own document.
  auto docs_in = [](const std::string& text) {
    std::set<std::string> out;
    for (const auto& w : utf8::SplitWhitespace(text)) {
      const size_t dot = w.find('.');
      if (dot != std::string::npos && (w[0] == 's' || w[0] == 't')) {
        out.insert(w.substr(1, dot - 1));
      }
    }
    return out;
  };
  size_t boundary = 0;
  for (ContextKind k : {ContextKind::k2Plus1, ContextKind::k3Plus1a, ContextKind::k3Plus1b,
                        ContextKind::k1t1sPlus1, ContextKind::k2Plus2}) {
    ContextScheme scheme;
    scheme.kind = k;
    Corpus out = BuildContext(in, scheme);
    const std::string name = scheme.Name();
    c.Expect(out.size() == in.size(), name + " length");
    if (out.size() != in.size()) continue;
    for (size_t i = 0; i < in.size(); ++i) {
      const bool first = i == 0 || in[i - 1].doc_id != in[i].doc_id;
      const bool last = i + 1 == in.size() || in[i + 1].doc_id != in[i].doc_id;
      if (first || last) ++boundary;
      const std::string own = in[i].src.substr(1, in[i].src.find('.') - 1);
      const std::set<std::string> want = {own};
      c.Expect(docs_in(out[i].src) == want && docs_in(out[i].tgt) == want,
               name + " leaks into line " + std::to_string(i));
      if (k == ContextKind::k2Plus2) {
        c.Expect(ExtractCurrent(out[i].tgt, scheme) == in[i].tgt,
                 "2+2 round trip at " + std::to_string(i));
      }
    }
  }
  c.Note("1000 documents, " + std::to_string(boundary) + " boundary-adjacent checks");
}

// ---- 11 ------------------------------------------------------------------

void Determinism(Checks& c, const testing::ToyModels& toy) {
  Corpus in = testing::MakePipelineFixture(10000, 11);
  auto run = [&](size_t jobs) {
    PipelineConfig cfg = testing::ToyPipelineConfig(FilterMode::kStrict);
    cfg.seed = 1234;
    cfg.jobs = jobs;
    PipelineResult r = RunPipeline(in, cfg, testing::ToyPipelineModels(toy));
    return testing::Serialize(r.kept) + "\x1f" + testing::Serialize(r.rejected) +
           "\x1f" + RenderReport({r.report}, ReportFormat::kTsv);
  };
  const std::string first = run(1);
  c.Expect(run(1) == first, "second run differs");
  c.Expect(run(3) == first, "jobs=3 differs from jobs=1");
}

// ---- 12 ------------------------------------------------------------------

void Throughput(Checks& c, const testing::ToyModels& toy, double* rate) {
  Corpus in = testing::MakePipelineFixture(20000, 12);
  HeuristicConfig cfg = DefaultHeuristicConfig("commoncrawl");
  size_t kept = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& p : in.pairs()) {
    HeuristicOutcome o = CheckPair(p, cfg);
    if (!o.passed()) continue;
    kept += LangIdGate(p, "xa", "xb", toy.langid_a, toy.langid_b).pass;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  *rate = static_cast<double>(in.size()) / secs;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.0f lines/s over %zu lines (%zu kept)", *rate,
                in.size(), kept);
  c.Note(buf);
  c.Expect(*rate >= 50000, "below 50k lines/s");
}

struct Criterion {
  int id;
  const char* name;
  double limit;  // seconds; 0 for none
  std::function<void(Checks&)> run;
  bool warn_only = false;
};

}  // namespace
}  // namespace bitext

int main() {
  using namespace bitext;
  testing::ToyModels toy = testing::TrainToyModels(5);
  double rate = 0;
  const std::vector<Criterion> all = {
      {1, "default thresholds", 1, DefaultsSnapshot},
      {2, "heuristic precision and recall", 5, HeuristicPrecisionRecall},
      {3, "report statistics", 10, [&](Checks& c) { StatisticsConsistency(c, toy); }},
      {4, "bpe oracle and round trip", 10, BpeOracle},
      {5, "ibm1 and hmm em", 5, AlignEm},
      {6, "alignment score discrimination", 30, AlignDiscriminates},
      {7, "kneser-ney oracle", 10, KnOracle},
      {8, "lm feature arithmetic", 5, LmFeatureArithmetic},
      {9, "langid gate", 30, LangIdGateCheck},
      {10, "document context", 5, DocContext},
      {11, "determinism", 60, [&](Checks& c) { Determinism(c, toy); }},
      {12, "throughput", 0, [&](Checks& c) { Throughput(c, toy, &rate); }, true},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Checks checks;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = checks.ok();
    std::string detail = checks.Summary();
    if (ok && cr.limit > 0 && secs > cr.limit) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    }
    const char* tag = ok ? "PASS" : (cr.warn_only ? "WARN" : "FAIL");
    if (!ok && !cr.warn_only) ++failed;
    std::printf("[%s] %2d %s (%.2fs", tag, cr.id, cr.name, secs);
    if (cr.limit > 0) std::printf(" / %.0fs", cr.limit);
    std::printf(")%s%s\n", detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
