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

#include "bitextclean/lmfilter.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

constexpr double kLn10 = 2.302585092994045684;
constexpr double kLn2 = 0.693147180559945309;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int KeyLen(const std::string& key) { return static_cast<int>(key.size() / 4); }

int KeyAt(const std::string& key, int i) {
  int v;
  std::memcpy(&v, key.data() + 4 * i, 4);
  return v;
}

std::string Prefix(const std::string& key) {
  return key.substr(0, key.size() - 4);
}
std::string Suffix(const std::string& key) { return key.substr(4); }

std::string FormatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ContextStats {
  double total = 0.0;
  double n1 = 0.0, n2 = 0.0, n3 = 0.0;
};

}  // namespace

KnDiscounts EstimateDiscounts(double n1, double n2, double n3, double n4) {
  KnDiscounts fallback;
  if (n1 <= 0 || n2 <= 0 || n3 <= 0 || n4 <= 0) return fallback;
  const double y = n1 / (n1 + 2.0 * n2);
  KnDiscounts d;
  d.d1 = 1.0 - 2.0 * y * n2 / n1;
  d.d2 = 2.0 - 3.0 * y * n3 / n2;
  d.d3 = 3.0 - 4.0 * y * n4 / n3;
  if (!(d.d1 > 0 && d.d1 <= 1 && d.d2 > 0 && d.d2 <= 2 && d.d3 > 0 &&
        d.d3 <= 3)) {
    return fallback;
  }
  return d;
}

std::string NgramModel::Key(const int* ids, int n) {
  std::string k(static_cast<size_t>(n) * 4, '\0');
  if (n > 0) std::memcpy(k.data(), ids, static_cast<size_t>(n) * 4);
  return k;
}

int NgramModel::AddWord(const std::string& word) {
  auto it = ids_.find(word);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  words_.push_back(word);
  ids_.emplace(word, id);
  return id;
}

int NgramModel::Id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? unk_ : it->second;
}

NgramModel NgramModel::Train(const std::vector<std::string>& lines,
                             const LmOptions& options) {
  if (options.max_order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_order must be >= 1");
  }
  if (lines.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no training lines for the LM");
  }
  NgramModel m;
  m.max_order_ = options.max_order;
  m.bos_ = m.AddWord(kLmBos);
  m.eos_ = m.AddWord(kLmEos);
  m.unk_ = m.AddWord(kLmUnk);

  std::vector<std::vector<int>> sents;
  sents.reserve(lines.size());
  size_t longest = 0;
  for (const auto& line : lines) {
    std::vector<int> s{m.bos_};
    for (auto tok : utf8::SplitWhitespaceView(line)) {
      s.push_back(m.AddWord(std::string(tok)));
    }
    s.push_back(m.eos_);
    longest = std::max(longest, s.size());
    sents.push_back(std::move(s));
  }
  const int N = std::min<int>(options.max_order, static_cast<int>(longest));
  const double V = static_cast<double>(m.words_.size() - 1);

  auto count_order = [&](int k) {
    std::unordered_map<std::string, double> c;
    for (const auto& s : sents) {
      for (int t = 1; t < static_cast<int>(s.size()); ++t) {
        if (t - k + 1 < 0) continue;
        c[Key(&s[t - k + 1], k)] += 1.0;
      }
    }
    return c;
  };

  std::vector<std::unordered_map<std::string, double>> raw(N + 2);
  std::vector<std::unordered_map<std::string, double>> prob(N + 1);
  std::vector<std::unordered_set<std::string>> kept(N + 1);
  raw[1] = count_order(1);
  double unigram_gamma = 0.0;
  int order = 1;
  const bool keep_all = !(options.grow_threshold > 0.0);

  for (int k = 1; k <= N; ++k) {
    if (k < N) raw[k + 1] = count_order(k + 1);
    std::unordered_map<std::string, double> adj;
    if (k == N) {
      adj = raw[k];
    } else {
      for (const auto& [g, c] : raw[k]) {
        if (KeyAt(g, 0) == m.bos_) adj[g] = c;
      }
      for (const auto& [g2, c] : raw[k + 1]) {
        (void)c;
        const std::string s = Suffix(g2);
        if (KeyAt(s, 0) != m.bos_) adj[s] += 1.0;
      }
    }
    double cc[5] = {0, 0, 0, 0, 0};
    for (const auto& [g, a] : adj) {
      (void)g;
      if (a >= 1 && a <= 4) cc[static_cast<int>(a)] += 1.0;
    }
    const KnDiscounts D = EstimateDiscounts(cc[1], cc[2], cc[3], cc[4]);
    m.discounts_.push_back(D);

    std::unordered_map<std::string, ContextStats> ctx;
    for (const auto& [g, a] : adj) {
      ContextStats& st = ctx[Prefix(g)];
      st.total += a;
      if (a >= 3) {
        st.n3 += 1;
      } else if (a >= 2) {
        st.n2 += 1;
      } else {
        st.n1 += 1;
      }
    }
    auto gamma = [&](const ContextStats& st) {
      return (D.d1 * st.n1 + D.d2 * st.n2 + D.d3 * st.n3) / st.total;
    };
    for (const auto& [g, a] : adj) {
      const ContextStats& st = ctx[Prefix(g)];
      const double lower = k == 1 ? 1.0 / V : prob[k - 1].at(Suffix(g));
      prob[k][g] = std::max(a - D.For(a), 0.0) / st.total + gamma(st) * lower;
    }
    if (k == 1) {
      unigram_gamma = gamma(ctx[std::string()]);
      for (const auto& [g, a] : adj) {
        (void)a;
        kept[1].insert(g);
      }
      continue;
    }
    for (const auto& [g, p] : prob[k]) {
      const std::string pre = Prefix(g);
      const bool pre_ok =
          (k == 2 && KeyAt(pre, 0) == m.bos_) || kept[k - 1].count(pre);
      if (!pre_ok || !kept[k - 1].count(Suffix(g))) continue;
      const double gain =
          raw[k].at(g) * std::log(p / prob[k - 1].at(Suffix(g)));
      if (keep_all || gain > options.grow_threshold) kept[k].insert(g);
    }
    if (kept[k].empty()) break;
    order = k;
    raw[k - 1].clear();
  }

  m.tables_.assign(order, {});
  for (int w = 0; w < static_cast<int>(m.words_.size()); ++w) {
    Entry e;
    if (w == m.bos_) {
      e.logp = kNegInf;
    } else {
      const std::string key = Key(&w, 1);
      auto it = prob[1].find(key);
      e.logp = std::log(it != prob[1].end() ? it->second : unigram_gamma / V);
    }
    m.tables_[0][Key(&w, 1)] = e;
  }
  for (int k = 2; k <= order; ++k) {
    for (const auto& g : kept[k]) {
      Entry e;
      e.logp = std::log(prob[k].at(g));
      m.tables_[k - 1][g] = e;
    }
  }
  m.ComputeBackoffs();
  return m;
}

void NgramModel::ComputeBackoffs() {
  for (int k = 1; k < order(); ++k) {
    std::unordered_map<std::string, std::pair<double, double>> sums;
    for (const auto& [g, e] : tables_[k]) {
      auto& s = sums[Prefix(g)];
      s.first += std::exp(e.logp);
      const std::string sfx = Suffix(g);
      s.second += std::exp(
          LogProbIds(reinterpret_cast<const int*>(sfx.data()), KeyLen(sfx) - 1,
                     KeyAt(sfx, KeyLen(sfx) - 1)));
    }
    for (const auto& [h, s] : sums) {
      auto it = tables_[k - 1].find(h);
      if (it == tables_[k - 1].end()) continue;
      const double num = 1.0 - s.first;
      const double den = 1.0 - s.second;
      double bo;
      if (num <= 0.0) {
        bo = 0.0;
      } else if (den <= 1e-300) {
        bo = 1.0;
      } else {
        bo = num / den;
      }
      it->second.backoff = bo > 0.0 ? std::log(bo) : kNegInf;
      it->second.has_backoff = true;
    }
  }
}

double NgramModel::LogProbIds(const int* ctx, int n_ctx, int word) const {
  int n = std::min(n_ctx, order() - 1);
  const int* end = ctx + n_ctx;
  double acc = 0.0;
  std::string key;
  for (; n >= 0; --n) {
    key.assign(reinterpret_cast<const char*>(end - n),
               static_cast<size_t>(n) * 4);
    key.append(reinterpret_cast<const char*>(&word), 4);
    auto it = tables_[n].find(key);
    if (it != tables_[n].end()) return acc + it->second.logp;
    if (n > 0) {
      auto h = tables_[n - 1].find(key.substr(0, static_cast<size_t>(n) * 4));
      if (h != tables_[n - 1].end()) acc += h->second.backoff;
    }
  }
  return kNegInf;
}

double NgramModel::LogProb(const std::vector<int>& context, int word) const {
  return LogProbIds(context.data(), static_cast<int>(context.size()), word);
}

double NgramModel::Prob(const std::vector<std::string>& context,
                        const std::string& word) const {
  std::vector<int> ids;
  for (const auto& w : context) ids.push_back(Id(w));
  return std::exp(LogProb(ids, Id(word)));
}

double NgramModel::CrossEntropy(std::string_view line) const {
  thread_local std::vector<int> seq;
  seq.clear();
  seq.push_back(bos_);
  for (auto tok : utf8::SplitWhitespaceView(line)) {
    auto it = ids_.find(std::string(tok));
    seq.push_back(it == ids_.end() || it->second == bos_ ? unk_ : it->second);
  }
  seq.push_back(eos_);
  double sum = 0.0;
  for (size_t t = 1; t < seq.size(); ++t) {
    sum += LogProbIds(seq.data(), static_cast<int>(t), seq[t]);
  }
  return -sum / kLn2 / static_cast<double>(seq.size() - 1);
}

size_t NgramModel::NumNgrams(int k) const {
  if (k < 1 || k > order()) return 0;
  return tables_[k - 1].size();
}

std::vector<int> NgramModel::PredictableIds() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(words_.size()); ++i) {
    if (i != bos_) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<int>> NgramModel::Contexts() const {
  std::vector<std::vector<int>> out;
  for (int k = 1; k < order(); ++k) {
    for (const auto& [g, e] : tables_[k - 1]) {
      if (k > 1 || KeyAt(g, 0) == bos_ || std::isfinite(e.logp)) {
        std::vector<int> ids(k);
        for (int i = 0; i < k; ++i) ids[i] = KeyAt(g, i);
        out.push_back(std::move(ids));
      }
    }
  }
  if (order() == 1) out.push_back({bos_});
  std::sort(out.begin(), out.end());
  return out;
}

bool NgramModel::HasNgram(const std::vector<std::string>& ngram) const {
  const int k = static_cast<int>(ngram.size());
  if (k < 1 || k > order()) return false;
  std::vector<int> ids;
  for (const auto& w : ngram) {
    auto it = ids_.find(w);
    if (it == ids_.end()) return false;
    ids.push_back(it->second);
  }
  return tables_[k - 1].count(Key(ids.data(), k)) > 0;
}

void NgramModel::WriteArpa(std::ostream& out) const {
  out << "\\data\\\n";
  for (int k = 1; k <= order(); ++k) {
    out << "ngram " << k << '=' << tables_[k - 1].size() << '\n';
  }
  for (int k = 1; k <= order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    std::vector<std::pair<std::string, const Entry*>> rows;
    for (const auto& [g, e] : tables_[k - 1]) {
      std::string words;
      for (int i = 0; i < k; ++i) {
        if (i) words += ' ';
        words += words_[KeyAt(g, i)];
      }
      rows.emplace_back(std::move(words), &e);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [words, e] : rows) {
      out << (std::isfinite(e->logp) ? FormatDouble(e->logp / kLn10) : "-99")
          << '\t' << words;
      if (e->has_backoff) {
        out << '\t'
            << (std::isfinite(e->backoff) ? FormatDouble(e->backoff / kLn10)
                                          : "-99");
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NgramModel NgramModel::ReadArpa(std::istream& in) {
  auto fail = [](const std::string& why) {
    return Error(ErrorCode::kModelLoadError, "ARPA: " + why);
  };
  NgramModel m;
  m.words_.clear();
  m.ids_.clear();
  m.bos_ = m.AddWord(kLmBos);
  m.eos_ = m.AddWord(kLmEos);
  m.unk_ = m.AddWord(kLmUnk);
  std::string line;
  bool seen_data = false;
  int section = 0;
  std::vector<size_t> declared;
  auto parse_log = [&](const std::string& s) {
    if (s == "-99") return kNegInf;
    try {
      return std::stod(s) * kLn10;
    } catch (const std::exception&) {
      throw fail("bad number '" + s + "'");
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "\\data\\") {
      seen_data = true;
      continue;
    }
    if (line == "\\end\\") break;
    if (line.rfind("ngram ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw fail("bad count line");
      declared.push_back(std::stoul(line.substr(eq + 1)));
      continue;
    }
    if (line[0] == '\\') {
      section = std::atoi(line.c_str() + 1);
      if (section < 1 || section > static_cast<int>(declared.size())) {
        throw fail("unexpected section " + line);
      }
      if (static_cast<int>(m.tables_.size()) < section) {
        m.tables_.resize(section);
      }
      continue;
    }
    if (section == 0) throw fail("record outside a section");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() < 2 || fields.size() > 3) throw fail("bad record");
    const auto words = utf8::SplitWhitespace(fields[1]);
    if (static_cast<int>(words.size()) != section) throw fail("bad n-gram");
    std::vector<int> ids;
    for (const auto& w : words) ids.push_back(m.AddWord(w));
    Entry e;
    e.logp = parse_log(fields[0]);
    if (fields.size() == 3) {
      e.backoff = parse_log(fields[2]);
      e.has_backoff = true;
    }
    m.tables_[section - 1][Key(ids.data(), section)] = e;
  }
  if (!seen_data || m.tables_.empty()) throw fail("no model data");
  for (size_t k = 0; k < declared.size() && k < m.tables_.size(); ++k) {
    if (declared[k] != m.tables_[k].size()) throw fail("count mismatch");
  }
  for (int w : {m.bos_, m.eos_, m.unk_}) {
    if (!m.tables_[0].count(Key(&w, 1))) {
      throw fail("missing unigram " + m.words_[w]);
    }
  }
  m.max_order_ = m.order();
  m.discounts_.assign(m.order(), KnDiscounts{});
  return m;
}

CrossEntropyRecord MakeCrossEntropyRecord(double h_src, double h_tgt) {
  CrossEntropyRecord r;
  r.h_src = h_src;
  r.h_tgt = h_tgt;
  r.avg = (h_src + h_tgt) / 2.0;
  r.max = std::max(h_src, h_tgt);
  r.absdiff = std::fabs(h_src - h_tgt);
  return r;
}

CrossEntropyRecord LmFeatures(const SentencePair& pair,
                              const NgramModel& q_src,
                              const NgramModel& q_tgt) {
  return MakeCrossEntropyRecord(q_src.CrossEntropy(pair.src),
                                q_tgt.CrossEntropy(pair.tgt));
}

FilterMode ParseFilterMode(std::string_view name) {
  std::string n = utf8::ToLower(name);
  if (n == "strict") return FilterMode::kStrict;
  if (n == "relaxed" || n == "relax") return FilterMode::kRelaxed;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown filter mode '" + std::string(name) + "'");
}

const char* FilterModeName(FilterMode mode) {
  return mode == FilterMode::kStrict ? "strict" : "relaxed";
}

LmThresholds ThresholdsFor(FilterMode mode) {
  if (mode == FilterMode::kStrict) return {13.0, 4.0};
  return {15.0, 5.0};
}

LmVerdict LmFilter(const CrossEntropyRecord& rec, const LmThresholds& th) {
  LmVerdict v;
  if (!(rec.avg <= th.avg)) v.reasons.emplace_back("lm_avg_ce");
  if (!(rec.absdiff <= th.diff)) v.reasons.emplace_back("lm_ce_diff");
  v.pass = v.reasons.empty();
  return v;
}

std::string FormatFeatureRow(size_t line_no, const CrossEntropyRecord& rec) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f", line_no,
                rec.h_src, rec.h_tgt, rec.avg, rec.max, rec.absdiff);
  return buf;
}

}  // namespace bitext
