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

#include "bitextclean/langid.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void LangIdModel::FeatureIndex::Reserve(size_t n) {
  size_t cap = 16;
  while (cap < n * 2) cap <<= 1;
  keys_.assign(cap, 0);
  values_.assign(cap, 0);
  mask_ = cap - 1;
  size_ = 0;
}

int64_t LangIdModel::FeatureIndex::Find(uint64_t key) const {
  if (keys_.empty()) return -1;
  key = key ? key : 1;
  for (size_t i = key & mask_;; i = (i + 1) & mask_) {
    if (keys_[i] == key) return values_[i];
    if (keys_[i] == 0) return -1;
  }
}

void LangIdModel::FeatureIndex::Insert(uint64_t key, uint32_t value) {
  if (keys_.empty() || (size_ + 1) * 2 > keys_.size()) Grow();
  key = key ? key : 1;
  size_t i = key & mask_;
  while (keys_[i] != 0 && keys_[i] != key) i = (i + 1) & mask_;
  if (keys_[i] == 0) ++size_;
  keys_[i] = key;
  values_[i] = value;
}

void LangIdModel::FeatureIndex::Grow() {
  std::vector<uint64_t> old_keys = std::move(keys_);
  std::vector<uint32_t> old_values = std::move(values_);
  Reserve(std::max<size_t>(16, old_keys.size()));
  for (size_t i = 0; i < old_keys.size(); ++i) {
    if (old_keys[i] != 0) Insert(old_keys[i], old_values[i]);
  }
}

// Calls fn(hash, bytes, begin, end) for every n-gram of the padded,
// lowercased line with min_n <= n <= max_n.
template <typename Fn>
void LangIdModel::ForEachNgram(std::string_view line, Fn&& fn) const {
  thread_local std::string bytes;
  thread_local std::vector<uint32_t> offsets;
  bytes.clear();
  offsets.clear();
  auto push = [&](char32_t cp) {
    offsets.push_back(static_cast<uint32_t>(bytes.size()));
    utf8::Append(&bytes, cp);
  };
  push(' ');
  size_t pos = 0;
  while (pos < line.size()) {
    const auto b = static_cast<unsigned char>(line[pos]);
    char32_t cp;
    if (b < 0x80) {
      cp = (b >= 'A' && b <= 'Z') ? b + 32 : b;
      ++pos;
    } else {
      cp = utf8::ToLower(utf8::Next(line, &pos));
    }
    if (cp == '\t') cp = ' ';
    push(cp);
  }
  push(' ');
  offsets.push_back(static_cast<uint32_t>(bytes.size()));
  const size_t n_cp = offsets.size() - 1;
  for (size_t i = 0; i < n_cp; ++i) {
    uint64_t h = kFnvOffset;
    size_t byte = offsets[i];
    for (int n = 1; n <= max_n_ && i + n <= n_cp; ++n) {
      const size_t end = offsets[i + n];
      for (; byte < end; ++byte) {
        h ^= static_cast<unsigned char>(bytes[byte]);
        h *= kFnvPrime;
      }
      if (n >= min_n_) fn(h, bytes, offsets[i], end);
    }
  }
}

LangIdModel LangIdModel::Train(
    const std::map<std::string, std::vector<std::string>>& corpora, int min_n,
    int max_n, double k) {
  if (corpora.size() < 2) {
    throw Error(ErrorCode::kTooFewLanguages,
                "need at least two languages, got " +
                    std::to_string(corpora.size()));
  }
  if (min_n < 1 || max_n < min_n || k <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad n-gram range or k");
  }
  LangIdModel m;
  m.min_n_ = min_n;
  m.max_n_ = max_n;
  m.k_ = k;
  const size_t L = corpora.size();
  std::vector<std::vector<double>> counts(L);  // [label][feature]
  std::vector<double> line_counts(L, 0.0);
  size_t l = 0;
  for (const auto& [lang, lines] : corpora) {
    m.labels_.push_back(lang);
    for (const auto& line : lines) {
      if (line.empty()) continue;
      line_counts[l] += 1;
      m.ForEachNgram(line, [&](uint64_t h, const std::string& bytes,
                               size_t b, size_t e) {
        int64_t idx = m.index_.Find(h);
        if (idx < 0) {
          idx = static_cast<int64_t>(m.features_.size());
          m.index_.Insert(h, static_cast<uint32_t>(idx));
          m.features_.push_back(bytes.substr(b, e - b));
        }
        auto& c = counts[l];
        if (c.size() <= static_cast<size_t>(idx)) c.resize(idx + 1, 0.0);
        c[idx] += 1;
      });
    }
    if (line_counts[l] == 0) {
      throw Error(ErrorCode::kEmptyLanguage, lang + " has no non-empty line");
    }
    ++l;
  }
  const size_t F = m.features_.size();
  double total_lines = 0;
  for (double c : line_counts) total_lines += c;
  m.log_priors_.resize(L);
  m.logprob_.assign(F * L, 0.0);
  for (size_t j = 0; j < L; ++j) {
    m.log_priors_[j] = std::log(line_counts[j] / total_lines);
    counts[j].resize(F, 0.0);
    double total = 0;
    for (double c : counts[j]) total += c;
    const double denom = std::log(total + k * static_cast<double>(F));
    for (size_t f = 0; f < F; ++f) {
      m.logprob_[f * L + j] = std::log(counts[j][f] + k) - denom;
    }
  }
  return m;
}

LangVerdict LangIdModel::Classify(std::string_view line,
                                  double reliability) const {
  const size_t L = labels_.size();
  LangVerdict v;
  v.posterior.assign(L, L ? 1.0 / static_cast<double>(L) : 0.0);
  if (L == 0) return v;
  if (utf8::Length(line) < static_cast<size_t>(min_n_)) {
    v.lang = labels_[0];
    v.prob = v.posterior[0];
    v.reliable = v.prob >= reliability && L == 1;
    return v;
  }
  thread_local std::vector<double> score;
  score.assign(log_priors_.begin(), log_priors_.end());
  ForEachNgram(line, [&](uint64_t h, const std::string&, size_t, size_t) {
    const int64_t idx = index_.Find(h);
    if (idx < 0) return;
    const double* row = &logprob_[static_cast<size_t>(idx) * L];
    for (size_t j = 0; j < L; ++j) score[j] += row[j];
  });
  const double mx = *std::max_element(score.begin(), score.end());
  double z = 0;
  for (size_t j = 0; j < L; ++j) {
    v.posterior[j] = std::exp(score[j] - mx);
    z += v.posterior[j];
  }
  size_t best = 0;
  for (size_t j = 0; j < L; ++j) {
    v.posterior[j] /= z;
    if (v.posterior[j] > v.posterior[best]) best = j;
  }
  v.lang = labels_[best];
  v.prob = v.posterior[best];
  v.reliable = v.prob >= reliability;
  return v;
}

void LangIdModel::Save(std::ostream& out) const {
  out << "#langid\t" << min_n_ << '\t' << max_n_ << '\t' << FormatDouble(k_)
      << '\t';
  for (size_t j = 0; j < labels_.size(); ++j) {
    out << (j ? "," : "") << labels_[j];
  }
  out << '\n';
  for (size_t j = 0; j < labels_.size(); ++j) {
    out << "#prior\t" << labels_[j] << '\t' << FormatDouble(log_priors_[j])
        << '\n';
  }
  const size_t L = labels_.size();
  for (size_t f = 0; f < features_.size(); ++f) {
    for (size_t j = 0; j < L; ++j) {
      out << labels_[j] << '\t' << features_[f] << '\t'
          << FormatDouble(logprob_[f * L + j]) << '\n';
    }
  }
}

namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> cols;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cols;
}

}  // namespace

LangIdModel LangIdModel::Load(std::istream& in) {
  LangIdModel m;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kModelLoadError, "empty langid model");
  }
  auto head = SplitTabs(line);
  if (head.size() != 5 || head[0] != "#langid") {
    throw Error(ErrorCode::kModelLoadError, "bad langid header");
  }
  try {
    m.min_n_ = std::stoi(head[1]);
    m.max_n_ = std::stoi(head[2]);
    m.k_ = std::stod(head[3]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kModelLoadError, "bad langid header values");
  }
  std::stringstream ls(head[4]);
  std::string lab;
  while (std::getline(ls, lab, ',')) m.labels_.push_back(lab);
  const size_t L = m.labels_.size();
  if (L < 2) throw Error(ErrorCode::kModelLoadError, "langid needs 2 labels");
  auto label_index = [&](const std::string& name) -> size_t {
    auto it = std::find(m.labels_.begin(), m.labels_.end(), name);
    if (it == m.labels_.end()) {
      throw Error(ErrorCode::kModelLoadError, "unknown label " + name);
    }
    return static_cast<size_t>(it - m.labels_.begin());
  };
  m.log_priors_.assign(L, 0.0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cols = SplitTabs(line);
    if (cols.size() != 3) {
      throw Error(ErrorCode::kModelLoadError, "bad langid record");
    }
    double value = 0;
    try {
      value = std::stod(cols[2]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kModelLoadError, "bad langid value");
    }
    if (cols[0] == "#prior") {
      m.log_priors_[label_index(cols[1])] = value;
      continue;
    }
    const size_t j = label_index(cols[0]);
    uint64_t h = kFnvOffset;
    for (char c : cols[1]) {
      h ^= static_cast<unsigned char>(c);
      h *= kFnvPrime;
    }
    int64_t idx = m.index_.Find(h);
    if (idx < 0) {
      idx = static_cast<int64_t>(m.features_.size());
      m.index_.Insert(h, static_cast<uint32_t>(idx));
      m.features_.push_back(cols[1]);
      m.logprob_.resize(m.logprob_.size() + L, 0.0);
    }
    m.logprob_[static_cast<size_t>(idx) * L + j] = value;
  }
  return m;
}

GateResult LangIdGate(const SentencePair& pair, std::string_view expected_src,
                      std::string_view expected_tgt, const LangIdModel& model_a,
                      const LangIdModel& model_b, double reliability) {
  GateResult r;
  const LangIdModel* models[2] = {&model_a, &model_b};
  r.src_ok = true;
  r.tgt_ok = true;
  for (int side = 0; side < 2; ++side) {
    const std::string_view text = side == 0 ? pair.src : pair.tgt;
    const std::string_view expected = side == 0 ? expected_src : expected_tgt;
    for (int m = 0; m < 2; ++m) {
      LangVerdict v = models[m]->Classify(text, reliability);
      if (v.lang != expected || !v.reliable) {
        (side == 0 ? r.src_ok : r.tgt_ok) = false;
        r.failures.push_back({side == 0 ? PairSide::kSource : PairSide::kTarget,
                              m, std::move(v)});
      }
    }
  }
  r.pass = r.src_ok && r.tgt_ok;
  return r;
}

}  // namespace bitext
