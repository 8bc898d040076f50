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

#include "bitextclean/subword.h"

#include <algorithm>
#include <functional>
#include <istream>
#include <ostream>
#include <queue>
#include <tuple>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {

bool IsReservedToken(std::string_view t) {
  if (t.size() < 3 || t.front() != '<' || t.back() != '>') return false;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    const char c = t[i];
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) {
      return false;
    }
  }
  return true;
}

size_t SubwordModel::PairHash::operator()(const MergePair& p) const noexcept {
  const size_t h1 = std::hash<std::string>()(p.first);
  const size_t h2 = std::hash<std::string>()(p.second);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

SubwordModel::SubwordModel(std::vector<MergePair> merges,
                           std::unordered_map<std::string, int64_t> vocab,
                           int64_t vocab_threshold, bool joint)
    : merges_(std::move(merges)),
      vocab_(std::move(vocab)),
      vocab_threshold_(vocab_threshold),
      joint_(joint) {
  for (size_t i = 0; i < merges_.size(); ++i) {
    if (!rank_.emplace(merges_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate merge " + merges_[i].first + " " +
                      merges_[i].second);
    }
    reverse_.try_emplace(merges_[i].first + merges_[i].second, merges_[i]);
  }
}

std::vector<std::string> SubwordModel::MergeSymbols(
    std::string_view token) const {
  std::vector<std::string> syms;
  size_t pos = 0;
  while (pos < token.size()) {
    const size_t start = pos;
    utf8::Next(token, &pos);
    syms.emplace_back(token.substr(start, pos - start));
  }
  syms.emplace_back(kBpeEndMarker);
  if (rank_.empty()) return syms;
  MergePair probe;
  while (syms.size() > 1) {
    int best = -1;
    for (size_t i = 0; i + 1 < syms.size(); ++i) {
      probe.first = syms[i];
      probe.second = syms[i + 1];
      auto it = rank_.find(probe);
      if (it != rank_.end() && (best < 0 || it->second < best)) {
        best = it->second;
      }
    }
    if (best < 0) break;
    const auto& [a, b] = merges_[best];
    std::vector<std::string> next;
    next.reserve(syms.size());
    for (size_t i = 0; i < syms.size(); ++i) {
      if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
        next.push_back(a + b);
        ++i;
      } else {
        next.push_back(std::move(syms[i]));
      }
    }
    syms = std::move(next);
  }
  return syms;
}

namespace {

// Converts end-marked symbols to (piece text, is_final) units.
std::vector<std::pair<std::string, bool>> ToPieces(
    std::vector<std::string> syms) {
  std::vector<std::pair<std::string, bool>> out;
  if (!syms.empty() && syms.back() == kBpeEndMarker) {
    syms.pop_back();
  } else if (!syms.empty()) {
    auto& last = syms.back();
    last.resize(last.size() - kBpeEndMarker.size());
  }
  for (size_t i = 0; i < syms.size(); ++i) {
    out.emplace_back(std::move(syms[i]), i + 1 == syms.size());
  }
  return out;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

bool SubwordModel::InVocab(const std::string& piece) const {
  auto it = vocab_.find(piece);
  return it != vocab_.end() && it->second >= vocab_threshold_;
}

void SubwordModel::SplitRecursive(
    const std::string& symbol, bool final,
    std::vector<std::pair<std::string, bool>>* out) const {
  // `symbol` carries the end marker when final.
  auto it = reverse_.find(symbol);
  if (it == reverse_.end()) {
    std::string text = symbol;
    if (final && EndsWith(text, kBpeEndMarker)) {
      text.resize(text.size() - kBpeEndMarker.size());
    }
    out->emplace_back(std::move(text), final);
    return;
  }
  const auto& [left, right] = it->second;
  if (final && right == kBpeEndMarker) {
    // The final piece without its marker.
    const std::string key = left;
    if (InVocab(key)) {
      out->emplace_back(left, true);
    } else {
      SplitRecursive(left, true, out);
    }
    return;
  }
  const std::string left_key = left + std::string(kBpeContinuation);
  if (InVocab(left_key)) {
    out->emplace_back(left, false);
  } else {
    SplitRecursive(left, false, out);
  }
  std::string right_text = right;
  if (final && EndsWith(right_text, kBpeEndMarker)) {
    right_text.resize(right_text.size() - kBpeEndMarker.size());
  }
  const std::string right_key =
      final ? right_text : right_text + std::string(kBpeContinuation);
  if (InVocab(right_key)) {
    out->emplace_back(right_text, final);
  } else {
    SplitRecursive(right, final, out);
  }
}

std::vector<std::string> SubwordModel::Segment(std::string_view token) const {
  if (IsReservedToken(token)) return {std::string(token)};
  auto syms = MergeSymbols(token);
  std::vector<std::pair<std::string, bool>> pieces;
  if (vocab_threshold_ > 0 && !vocab_.empty()) {
    // A bare trailing end marker means the preceding symbol is final but
    // was never merged with the marker.
    const bool bare_end = syms.size() > 1 && syms.back() == kBpeEndMarker;
    if (bare_end) syms.pop_back();
    for (size_t i = 0; i < syms.size(); ++i) {
      const bool final = i + 1 == syms.size();
      std::string text = syms[i];
      if (final && !bare_end) text.resize(text.size() - kBpeEndMarker.size());
      const std::string key =
          final ? text : text + std::string(kBpeContinuation);
      if (InVocab(key)) {
        pieces.emplace_back(std::move(text), final);
      } else {
        SplitRecursive(syms[i], final, &pieces);
      }
    }
  } else {
    pieces = ToPieces(std::move(syms));
  }
  std::vector<std::string> out;
  out.reserve(pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (i + 1 < pieces.size()) {
      out.push_back(pieces[i].first + std::string(kBpeContinuation));
    } else {
      out.push_back(std::move(pieces[i].first));
    }
  }
  return out;
}

std::vector<std::string> SubwordModel::Apply(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size() * 2);
  for (const auto& t : tokens) {
    auto pieces = Segment(t);
    for (auto& p : pieces) out.push_back(std::move(p));
  }
  return out;
}

void SubwordModel::SaveMerges(std::ostream& out) const {
  out << "#version: 0.2\n";
  for (const auto& [a, b] : merges_) out << a << ' ' << b << '\n';
}

SubwordModel SubwordModel::LoadMerges(std::istream& in) {
  std::vector<MergePair> merges;
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (ln == 1 && StartsWith(line, "#version")) continue;
    if (line.empty()) continue;
    const size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 == line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw Error(ErrorCode::kModelLoadError,
                  "merge file line " + std::to_string(ln));
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  try {
    return SubwordModel(std::move(merges), {}, 0, true);
  } catch (const Error& e) {
    throw Error(ErrorCode::kModelLoadError, e.what());
  }
}

void SubwordModel::SaveVocab(std::ostream& out) const {
  std::vector<std::pair<std::string, int64_t>> v(vocab_.begin(), vocab_.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return std::tie(b.second, a.first) < std::tie(a.second, b.first);
  });
  for (const auto& [p, c] : v) out << p << ' ' << c << '\n';
}

std::unordered_map<std::string, int64_t> SubwordModel::LoadVocab(
    std::istream& in) {
  std::unordered_map<std::string, int64_t> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t sp = line.rfind(' ');
    if (sp == std::string::npos) {
      throw Error(ErrorCode::kModelLoadError, "bad vocabulary line: " + line);
    }
    try {
      vocab[line.substr(0, sp)] = std::stoll(line.substr(sp + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kModelLoadError, "bad vocabulary line: " + line);
    }
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Learning

namespace {

class BpeLearner {
 public:
  explicit BpeLearner(
      const std::vector<std::pair<std::string, int64_t>>& word_counts) {
    const int end_id = Intern(std::string(kBpeEndMarker));
    for (const auto& [word, freq] : word_counts) {
      std::vector<int> syms;
      size_t pos = 0;
      while (pos < word.size()) {
        const size_t start = pos;
        utf8::Next(word, &pos);
        syms.push_back(Intern(word.substr(start, pos - start)));
      }
      syms.push_back(end_id);
      words_.push_back(std::move(syms));
      freqs_.push_back(freq);
    }
    for (size_t w = 0; w < words_.size(); ++w) AddPairs(w, +1);
    for (const auto& [key, c] : counts_) Push(key);
  }

  std::vector<MergePair> Run(int num_merges, int64_t min_frequency) {
    std::vector<MergePair> merges;
    while (static_cast<int>(merges.size()) < num_merges && !heap_.empty()) {
      const Entry top = heap_.top();
      heap_.pop();
      auto it = counts_.find(top.key);
      if (it == counts_.end() || it->second != top.count) continue;
      if (top.count < min_frequency || top.count <= 0) break;
      const int a = static_cast<int>(top.key >> 32);
      const int b = static_cast<int>(top.key & 0xFFFFFFFF);
      merges.emplace_back(symbols_[a], symbols_[b]);
      Merge(a, b);
    }
    return merges;
  }

 private:
  struct Entry {
    int64_t count;
    uint64_t key;
  };

  int Intern(const std::string& s) {
    auto [it, inserted] = ids_.try_emplace(s, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  }

  static uint64_t Key(int a, int b) {
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
  }

  void AddPairs(size_t w, int sign) {
    const auto& s = words_[w];
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      const uint64_t k = Key(s[i], s[i + 1]);
      counts_[k] += sign * freqs_[w];
      if (sign > 0) index_[k].push_back(static_cast<int>(w));
      changed_.push_back(k);
    }
  }

  void Push(uint64_t key) {
    auto it = counts_.find(key);
    if (it != counts_.end() && it->second > 0) heap_.push({it->second, key});
  }

  void Merge(int a, int b) {
    const uint64_t key = Key(a, b);
    const int merged = Intern(symbols_[a] + symbols_[b]);
    std::vector<int> ws = std::move(index_[key]);
    index_.erase(key);
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    changed_.clear();
    for (int w : ws) {
      auto& s = words_[w];
      bool has = false;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == a && s[i + 1] == b) {
          has = true;
          break;
        }
      }
      if (!has) continue;
      AddPairs(w, -1);
      std::vector<int> next;
      next.reserve(s.size());
      for (size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i] == a && s[i + 1] == b) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(s[i]);
        }
      }
      s = std::move(next);
      AddPairs(w, +1);
    }
    std::sort(changed_.begin(), changed_.end());
    changed_.erase(std::unique(changed_.begin(), changed_.end()),
                   changed_.end());
    for (uint64_t k : changed_) {
      auto it = counts_.find(k);
      if (it != counts_.end() && it->second <= 0) {
        counts_.erase(it);
        index_.erase(k);
      } else {
        Push(k);
      }
    }
  }

  struct Less {
    const std::vector<std::string>* symbols;
    // Max-heap on count; among equal counts the lexicographically smallest
    // pair must come out first.
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.count != y.count) return x.count < y.count;
      const auto& s = *symbols;
      const auto& xa = s[x.key >> 32];
      const auto& ya = s[y.key >> 32];
      if (xa != ya) return xa > ya;
      return s[x.key & 0xFFFFFFFF] > s[y.key & 0xFFFFFFFF];
    }
  };

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::vector<int>> words_;
  std::vector<int64_t> freqs_;
  std::unordered_map<uint64_t, int64_t> counts_;
  std::unordered_map<uint64_t, std::vector<int>> index_;
  std::vector<uint64_t> changed_;
  std::priority_queue<Entry, std::vector<Entry>, Less> heap_{Less{&symbols_}};
};

}  // namespace

SubwordModel LearnBpeFromCounts(
    const std::vector<std::pair<std::string, int64_t>>& word_counts,
    const BpeOptions& options) {
  if (word_counts.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no tokens to learn BPE from");
  }
  if (options.num_merges < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative merge count");
  }
  BpeLearner learner(word_counts);
  auto merges = learner.Run(options.num_merges, options.min_frequency);
  SubwordModel plain(merges, {}, 0, options.joint);
  std::unordered_map<std::string, int64_t> vocab;
  for (const auto& [word, freq] : word_counts) {
    for (const auto& piece : plain.Segment(word)) vocab[piece] += freq;
  }
  return SubwordModel(std::move(merges), std::move(vocab),
                      options.vocab_threshold, options.joint);
}

SubwordModel LearnBpe(const std::vector<std::string>& lines,
                      const BpeOptions& options) {
  std::unordered_map<std::string, size_t> slot;
  std::vector<std::pair<std::string, int64_t>> counts;
  for (const auto& line : lines) {
    for (auto tok : utf8::SplitWhitespaceView(line)) {
      if (IsReservedToken(tok)) continue;
      auto [it, inserted] = slot.try_emplace(std::string(tok), counts.size());
      if (inserted) counts.emplace_back(std::string(tok), 0);
      counts[it->second].second += 1;
    }
  }
  return LearnBpeFromCounts(counts, options);
}

std::vector<std::string> Unsegment(const std::vector<std::string>& pieces) {
  std::vector<std::string> out;
  std::string cur;
  bool open = false;
  for (const auto& p : pieces) {
    if (EndsWith(p, kBpeContinuation)) {
      cur.append(p, 0, p.size() - kBpeContinuation.size());
      open = true;
    } else {
      cur.append(p);
      out.push_back(std::move(cur));
      cur.clear();
      open = false;
    }
  }
  if (open) out.push_back(std::move(cur));
  return out;
}

void ValidateGlueMarkers(const std::vector<std::string>& toks) {
  for (size_t i = 0; i < toks.size(); ++i) {
    const bool glues_right = EndsWith(toks[i], kGlueRight);
    const bool next_glues_left =
        i + 1 < toks.size() && StartsWith(toks[i + 1], kGlueLeft);
    if (glues_right != next_glues_left) {
      throw Error(ErrorCode::kMarkerMismatch,
                  "unpaired glue marker at token " + std::to_string(i) +
                      " '" + toks[i] + "'");
    }
  }
  if (!toks.empty() && StartsWith(toks.front(), kGlueLeft)) {
    throw Error(ErrorCode::kMarkerMismatch,
                "leading glue marker without a preceding unit");
  }
}

std::vector<std::string> PreSegmentCompose(
    const std::vector<std::string>& morph_tokens, const SubwordModel& model) {
  ValidateGlueMarkers(morph_tokens);
  return model.Apply(morph_tokens);
}

std::vector<std::string> RestoreWords(const std::vector<std::string>& pieces) {
  const auto units = Unsegment(pieces);
  std::vector<std::string> out;
  bool glue = false;
  for (const auto& u : units) {
    std::string_view v = u;
    const bool left = StartsWith(v, kGlueLeft);
    if (left) v.remove_prefix(kGlueLeft.size());
    const bool right = EndsWith(v, kGlueRight);
    if (right) v.remove_suffix(kGlueRight.size());
    if (glue && left && !out.empty()) {
      out.back().append(v);
    } else {
      out.emplace_back(v);
    }
    glue = right;
  }
  return out;
}

SentencePair AddDomainLabel(SentencePair pair, const DomainLabel& label) {
  auto toks = utf8::SplitWhitespace(pair.src);
  const std::string tok = label.token();
  if (!IsReservedToken(tok)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid label " + label.name);
  }
  if (!toks.empty() && IsReservedToken(toks.front())) {
    toks.front() = tok;
  } else {
    toks.insert(toks.begin(), tok);
  }
  pair.src = utf8::Join(toks, " ");
  return pair;
}

BpeOptions BpeRecipe(std::string_view name) {
  BpeOptions o;
  if (name == "ende") {
    o.num_merges = 35000;
  } else if (name == "enfi") {
    o.num_merges = 37000;
  } else if (name == "bpe50k") {
    o.num_merges = 50000;
    o.vocab_threshold = 50;
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown BPE recipe '" + std::string(name) + "'");
  }
  return o;
}

}  // namespace bitext
