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

#include "bitextclean/wordalign.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {
namespace {

constexpr const char* kNullWord = "<NULL>";
constexpr int kMaxFertility = 9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Sentences = std::vector<std::vector<int>>;

double SafeLog(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

void InitJump(std::array<double, kJumpBins>* jump) {
  double z = 0.0;
  for (int b = 0; b < kJumpBins; ++b) {
    const int d = b - kMaxJump;
    (*jump)[b] = 1.0 / (1.0 + std::abs(d - 1));
    z += (*jump)[b];
  }
  for (double& p : *jump) p /= z;
}

// Position the chain sits at after consuming path[0..j).
int CarriedPosition(const std::vector<int>& path, size_t j) {
  int cp = -1;
  for (size_t k = 0; k < j; ++k) {
    if (path[k] >= 0) {
      cp = path[k];
    } else if (cp < 0) {
      cp = 0;
    }
  }
  return cp;
}

int NextReal(const std::vector<int>& path, size_t j) {
  for (size_t k = j + 1; k < path.size(); ++k) {
    if (path[k] >= 0) return static_cast<int>(k);
  }
  return -1;
}

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int SampleIndex(const std::vector<double>& w, std::mt19937_64& rng) {
  double z = 0.0;
  for (double x : w) z += x;
  if (!(z > 0.0)) return static_cast<int>(w.size()) - 1;
  double u = Uniform01(rng) * z;
  for (size_t i = 0; i < w.size(); ++i) {
    u -= w[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(w.size()) - 1;
}

uint64_t SplitMix(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<int> Encode(const std::vector<std::string>& words,
                        const Vocab& vocab) {
  std::vector<int> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(vocab.Find(w));
  return out;
}

// Emission probabilities: rows j, columns 0..2I-1 (real then null states).
std::vector<double> Emissions(const std::vector<int>& emit,
                              const std::vector<int>& gen,
                              const AlignModel& model) {
  const size_t I = emit.size(), J = gen.size();
  std::vector<double> b(J * 2 * I);
  for (size_t j = 0; j < J; ++j) {
    const double tn = model.T(Vocab::kNull, gen[j]);
    for (size_t i = 0; i < I; ++i) {
      b[j * 2 * I + i] = model.T(emit[i], gen[j]);
      b[j * 2 * I + I + i] = tn;
    }
  }
  return b;
}

struct HmmCounts {
  std::unordered_map<uint64_t, double> lex;
  std::array<double, kJumpBins> jump{};
};

// Forward-backward over one sentence; adds expected counts when `counts` is
// non-null and returns the log-likelihood.
double ForwardBackward(const std::vector<int>& emit,
                       const std::vector<int>& gen, const AlignModel& model,
                       HmmCounts* counts) {
  const int I = static_cast<int>(emit.size());
  const int J = static_cast<int>(gen.size());
  if (I == 0 || J == 0) return 0.0;
  const int S = 2 * I;
  const double p0 = model.p_null;
  const std::vector<double> b = Emissions(emit, gen, model);
  std::vector<double> jt(2 * I + 1);  // (1-p0) * jump(d) for d in [-I, I]
  for (int d = -I; d <= I; ++d) jt[d + I] = (1.0 - p0) * model.Jump(d);
  auto JT = [&](int d) { return jt[d + I]; };

  std::vector<double> alpha(static_cast<size_t>(J) * S, 0.0);
  std::vector<double> scale(J, 0.0);
  double ll = 0.0;
  for (int s = 0; s < I; ++s) alpha[s] = JT(s + 1) * b[s];
  alpha[I] = p0 * b[I];
  std::vector<double> m(I);
  for (int j = 0; j < J; ++j) {
    double* a = &alpha[static_cast<size_t>(j) * S];
    const double* bj = &b[static_cast<size_t>(j) * S];
    if (j > 0) {
      const double* prev = a - S;
      for (int p = 0; p < I; ++p) m[p] = prev[p] + prev[I + p];
      for (int s = 0; s < I; ++s) {
        double acc = 0.0;
        for (int p = 0; p < I; ++p) acc += m[p] * JT(s - p);
        a[s] = acc * bj[s];
        a[I + s] = p0 * m[s] * bj[I + s];
      }
    }
    double c = 0.0;
    for (int s = 0; s < S; ++s) c += a[s];
    if (!(c > 0.0)) return kNegInf;
    for (int s = 0; s < S; ++s) a[s] /= c;
    scale[j] = c;
    ll += std::log(c);
  }
  if (counts == nullptr) return ll;

  std::vector<double> beta(static_cast<size_t>(J) * S, 0.0);
  for (int s = 0; s < S; ++s) beta[static_cast<size_t>(J - 1) * S + s] = 1.0;
  std::vector<double> w(S);
  for (int j = J - 2; j >= 0; --j) {
    const double* bn = &b[static_cast<size_t>(j + 1) * S];
    const double* betan = &beta[static_cast<size_t>(j + 1) * S];
    double* bt = &beta[static_cast<size_t>(j) * S];
    for (int s = 0; s < S; ++s) w[s] = bn[s] * betan[s];
    for (int p = 0; p < I; ++p) {
      double acc = 0.0;
      for (int s = 0; s < I; ++s) acc += JT(s - p) * w[s];
      acc += p0 * w[I + p];
      acc /= scale[j + 1];
      bt[p] = acc;
      bt[I + p] = acc;
    }
  }

  for (int j = 0; j < J; ++j) {
    const double* a = &alpha[static_cast<size_t>(j) * S];
    const double* bt = &beta[static_cast<size_t>(j) * S];
    for (int s = 0; s < I; ++s) {
      const double g = a[s] * bt[s];
      if (g > 0.0) counts->lex[AlignModel::Key(emit[s], gen[j])] += g;
    }
    double gnull = 0.0;
    for (int s = I; s < S; ++s) gnull += a[s] * bt[s];
    if (gnull > 0.0) counts->lex[AlignModel::Key(Vocab::kNull, gen[j])] += gnull;
    if (j == 0) {
      for (int s = 0; s < I; ++s) {
        counts->jump[ClampJump(s + 1) + kMaxJump] += a[s] * bt[s];
      }
      continue;
    }
    const double* prev = a - S;
    const double* bj = &b[static_cast<size_t>(j) * S];
    for (int p = 0; p < I; ++p) m[p] = prev[p] + prev[I + p];
    for (int s = 0; s < I; ++s) {
      const double tail = bj[s] * bt[s] / scale[j];
      if (tail == 0.0) continue;
      for (int p = 0; p < I; ++p) {
        counts->jump[ClampJump(s - p) + kMaxJump] += m[p] * JT(s - p) * tail;
      }
    }
  }
  return ll;
}

void NormalizeRows(const std::unordered_map<uint64_t, double>& counts,
                   AlignModel* model) {
  std::unordered_map<uint32_t, double> totals;
  for (const auto& [k, c] : counts) totals[static_cast<uint32_t>(k >> 32)] += c;
  for (const auto& [k, c] : counts) {
    const double z = totals[static_cast<uint32_t>(k >> 32)];
    model->SetT(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                z > 0.0 ? c / z : 0.0);
  }
}

std::vector<int> OneGibbsSweep(const std::vector<int>& emit,
                               const std::vector<int>& gen,
                               std::vector<int> path, const AlignModel& model,
                               std::mt19937_64& rng) {
  const int I = static_cast<int>(emit.size());
  const double p0 = model.p_null;
  std::vector<double> w(I + 1);
  for (size_t j = 0; j < gen.size(); ++j) {
    const int prev = CarriedPosition(path, j);
    const int nk = NextReal(path, j);
    for (int i = 0; i < I; ++i) {
      double x = (1.0 - p0) * model.Jump(i - prev) * model.T(emit[i], gen[j]);
      if (nk >= 0) x *= (1.0 - p0) * model.Jump(path[nk] - i);
      w[i] = x;
    }
    double x = p0 * model.T(Vocab::kNull, gen[j]);
    if (nk >= 0) x *= (1.0 - p0) * model.Jump(path[nk] - (prev < 0 ? 0 : prev));
    w[I] = x;
    const int pick = SampleIndex(w, rng);
    path[j] = pick == I ? -1 : pick;
  }
  return path;
}

// Collapsed Gibbs sampler over HMM alignments with Dirichlet priors.
class GibbsTrainer {
 public:
  GibbsTrainer(const Sentences& emit, const Sentences& gen, AlignModel* model,
               const AlignOptions& opt)
      : emit_(emit), gen_(gen), model_(model), opt_(opt), rng_(opt.seed) {
    support_.assign(model->e_vocab.size(), 0);
    for (const auto& [k, p] : model->table()) {
      (void)p;
      ++support_[k >> 32];
    }
    vf_ = model->f_vocab.size() - 1;
    ctot_.assign(model->e_vocab.size(), 0.0);
    fert_hist_.assign(model->e_vocab.size(), {});
    paths_.resize(emit.size());
    fert_.resize(emit.size());
    for (size_t n = 0; n < emit.size(); ++n) {
      paths_[n] = ViterbiAlign(emit[n], gen[n], *model);
      fert_[n].assign(emit[n].size(), 0);
      Apply(n, +1);
    }
  }

  void Run(int sweeps, std::vector<double>* log) {
    for (int it = 0; it < sweeps; ++it) {
      for (size_t n = 0; n < emit_.size(); ++n) {
        for (size_t j = 0; j < gen_[n].size(); ++j) Resample(n, j);
      }
      Estimate();
      if (log != nullptr) {
        double lp = 0.0;
        for (size_t n = 0; n < emit_.size(); ++n) {
          lp += PathLogProb(emit_[n], gen_[n], paths_[n], *model_);
        }
        log->push_back(lp);
      }
    }
    Estimate();
    if (opt_.fertility) {
      std::unordered_map<int, std::vector<double>> hist;
      for (size_t e = 0; e < fert_hist_.size(); ++e) {
        if (fert_hist_[e].empty()) continue;
        hist[static_cast<int>(e)] = fert_hist_[e];
      }
      model_->fertility = std::move(hist);
    }
  }

 private:
  double Lex(int e, int f) const {
    auto it = lex_.find(AlignModel::Key(e, f));
    const double c = it == lex_.end() ? 0.0 : it->second;
    return (c + opt_.lex_prior) / (ctot_[e] + opt_.lex_prior * vf_);
  }
  double JumpP(int d, int extra_bin, double extra) const {
    const int bin = ClampJump(d) + kMaxJump;
    return (jc_[bin] + (bin == extra_bin ? extra : 0.0) + opt_.jump_prior) /
           (jtot_ + extra + kJumpBins * opt_.jump_prior);
  }
  void AddJump(int d, double delta) {
    jc_[ClampJump(d) + kMaxJump] += delta;
    jtot_ += delta;
  }
  void AddFert(int e, int from, int to) {
    auto& h = fert_hist_[e];
    if (h.empty()) h.assign(kMaxFertility + 1, 0.0);
    if (from >= 0) h[std::min(from, kMaxFertility)] -= 1.0;
    if (to >= 0) h[std::min(to, kMaxFertility)] += 1.0;
  }

  // Adds (+1) or removes (-1) every count of sentence n.
  void Apply(size_t n, int sign) {
    const auto& path = paths_[n];
    const auto& e = emit_[n];
    const auto& f = gen_[n];
    int cp = -1;
    std::vector<int> fert(e.size(), 0);
    for (size_t j = 0; j < f.size(); ++j) {
      const int ew = path[j] >= 0 ? e[path[j]] : Vocab::kNull;
      lex_[AlignModel::Key(ew, f[j])] += sign;
      ctot_[ew] += sign;
      if (path[j] >= 0) {
        AddJump(path[j] - cp, sign);
        cp = path[j];
        ++fert[path[j]];
      } else if (cp < 0) {
        cp = 0;
      }
    }
    if (opt_.fertility) {
      for (size_t i = 0; i < e.size(); ++i) {
        if (sign > 0) {
          AddFert(e[i], -1, fert[i]);
        } else {
          AddFert(e[i], fert[i], -1);
        }
      }
    }
    fert_[n] = sign > 0 ? fert : std::vector<int>(e.size(), 0);
  }

  void Resample(size_t n, size_t j) {
    auto& path = paths_[n];
    const auto& e = emit_[n];
    const int f = gen_[n][j];
    const int I = static_cast<int>(e.size());
    const int prev = CarriedPosition(path, j);
    const int null_prev = prev < 0 ? 0 : prev;
    const int nk = NextReal(path, j);
    const int next = nk >= 0 ? path[nk] : 0;
    const double p0 = model_->p_null;

    // Remove the current link and the jumps it takes part in.
    const int old = path[j];
    const int old_e = old >= 0 ? e[old] : Vocab::kNull;
    lex_[AlignModel::Key(old_e, f)] -= 1.0;
    ctot_[old_e] -= 1.0;
    if (old >= 0) {
      AddJump(old - prev, -1.0);
      if (nk >= 0) AddJump(next - old, -1.0);
      if (opt_.fertility) {
        AddFert(e[old], fert_[n][old], fert_[n][old] - 1);
        --fert_[n][old];
      }
    } else if (nk >= 0) {
      AddJump(next - null_prev, -1.0);
    }

    std::vector<double> w(I + 1);
    for (int i = 0; i < I; ++i) {
      const int d1 = i - prev;
      double x = (1.0 - p0) * Lex(e[i], f) * JumpP(d1, -1, 0.0);
      if (nk >= 0) x *= JumpP(next - i, ClampJump(d1) + kMaxJump, 1.0);
      if (opt_.fertility) {
        const auto& h = fert_hist_[e[i]];
        const int phi = std::min(fert_[n][i], kMaxFertility);
        const int up = std::min(phi + 1, kMaxFertility);
        // Histogram without this position's own entry.
        auto H = [&](int k) {
          double v = h.empty() ? 0.0 : h[k];
          if (k == phi) v -= 1.0;
          return std::max(0.0, v);
        };
        x *= (H(up) + opt_.fertility_prior) / (H(phi) + opt_.fertility_prior);
      }
      w[i] = x;
    }
    double x = p0 * Lex(Vocab::kNull, f);
    if (nk >= 0) x *= JumpP(next - null_prev, -1, 0.0);
    w[I] = x;
    const int pick = SampleIndex(w, rng_);
    const int now = pick == I ? -1 : pick;
    path[j] = now;

    const int new_e = now >= 0 ? e[now] : Vocab::kNull;
    lex_[AlignModel::Key(new_e, f)] += 1.0;
    ctot_[new_e] += 1.0;
    if (now >= 0) {
      AddJump(now - prev, 1.0);
      if (nk >= 0) AddJump(next - now, 1.0);
      if (opt_.fertility) {
        AddFert(e[now], fert_[n][now], fert_[n][now] + 1);
        ++fert_[n][now];
      }
    } else if (nk >= 0) {
      AddJump(next - null_prev, 1.0);
    }
  }

  // Posterior-mean parameters over each emitter's co-occurrence support.
  void Estimate() {
    std::vector<std::pair<uint64_t, double>> updates;
    updates.reserve(model_->table().size());
    for (const auto& [k, p] : model_->table()) {
      (void)p;
      const int ew = static_cast<int>(k >> 32);
      auto it = lex_.find(k);
      const double c = it == lex_.end() ? 0.0 : it->second;
      updates.emplace_back(k, (c + opt_.lex_prior) /
                                  (ctot_[ew] + opt_.lex_prior * support_[ew]));
    }
    for (const auto& [k, p] : updates) {
      model_->SetT(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                   p);
    }
    for (int b = 0; b < kJumpBins; ++b) {
      model_->jump[b] =
          (jc_[b] + opt_.jump_prior) / (jtot_ + kJumpBins * opt_.jump_prior);
    }
  }

  const Sentences& emit_;
  const Sentences& gen_;
  AlignModel* model_;
  AlignOptions opt_;
  std::mt19937_64 rng_;
  std::unordered_map<uint64_t, double> lex_;
  std::vector<double> ctot_;
  std::vector<int> support_;
  int vf_ = 1;
  std::array<double, kJumpBins> jc_{};
  double jtot_ = 0.0;
  std::vector<std::vector<int>> paths_;
  std::vector<std::vector<int>> fert_;
  std::vector<std::vector<double>> fert_hist_;
};

AlignmentLinks LinksFromPath(const std::vector<int>& path, bool forward) {
  AlignmentLinks out;
  for (size_t k = 0; k < path.size(); ++k) {
    if (path[k] < 0) continue;
    if (forward) {
      out.links.emplace(path[k], static_cast<int>(k));
    } else {
      out.links.emplace(static_cast<int>(k), path[k]);
    }
  }
  return out;
}

void CollectFertility(const Sentences& emit, const Sentences& gen,
                      AlignModel* model) {
  std::unordered_map<int, std::vector<double>> hist;
  for (size_t n = 0; n < emit.size(); ++n) {
    const auto path = ViterbiAlign(emit[n], gen[n], *model);
    std::vector<int> fert(emit[n].size(), 0);
    for (int a : path) {
      if (a >= 0) ++fert[a];
    }
    for (size_t i = 0; i < fert.size(); ++i) {
      auto& h = hist[emit[n][i]];
      if (h.empty()) h.assign(kMaxFertility + 1, 0.0);
      h[std::min(fert[i], kMaxFertility)] += 1.0;
    }
  }
  model->fertility = std::move(hist);
}

}  // namespace

Vocab::Vocab() {
  Add(kNullWord);
  Add("<UNK>");
}

int Vocab::Add(std::string_view word) {
  auto it = ids_.find(std::string(word));
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(words_.back(), id);
  return id;
}

int Vocab::Find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnk : it->second;
}

double AlignModel::T(int e, int f) const {
  auto it = t_.find(Key(e, f));
  if (it != t_.end()) return it->second;
  if (e >= 0 && static_cast<size_t>(e) < row_floor_.size() &&
      row_floor_[e] > 0.0) {
    return row_floor_[e];
  }
  return uniform_floor_;
}

void AlignModel::SetRowFloor(int e, double p) {
  if (static_cast<size_t>(e) >= row_floor_.size()) row_floor_.resize(e + 1, 0);
  row_floor_[e] = p;
}

double AlignModel::RowSum(int e) const {
  double sum = 0.0;
  int n = 0;
  for (const auto& [k, p] : t_) {
    if (static_cast<int>(k >> 32) != e) continue;
    if ((k & 0xffffffffu) == static_cast<uint64_t>(Vocab::kNull)) continue;
    sum += p;
    ++n;
  }
  const int missing = f_vocab.size() - 1 - n;
  if (missing > 0) sum += missing * T(e, -1);
  return sum;
}

AlignModel TrainIbm1(const Sentences& emit, const Sentences& gen,
                     const Vocab& e_vocab, const Vocab& f_vocab, int iters,
                     std::vector<double>* log) {
  if (iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "IBM1 iterations must be >= 1");
  }
  AlignModel model;
  model.e_vocab = e_vocab;
  model.f_vocab = f_vocab;
  InitJump(&model.jump);

  std::unordered_map<uint64_t, double> counts;
  for (size_t n = 0; n < emit.size(); ++n) {
    for (int f : gen[n]) {
      counts[AlignModel::Key(Vocab::kNull, f)] = 0.0;
      for (int e : emit[n]) counts[AlignModel::Key(e, f)] = 0.0;
    }
  }
  std::unordered_map<uint32_t, double> support;
  for (const auto& [k, c] : counts) {
    (void)c;
    support[static_cast<uint32_t>(k >> 32)] += 1.0;
  }
  for (const auto& [k, c] : counts) {
    (void)c;
    model.SetT(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
               1.0 / support[static_cast<uint32_t>(k >> 32)]);
  }

  std::vector<double> probs;
  for (int it = 0; it < iters; ++it) {
    for (auto& [k, c] : counts) c = 0.0;
    double ll = 0.0;
    for (size_t n = 0; n < emit.size(); ++n) {
      const auto& e = emit[n];
      const double norm = 1.0 / static_cast<double>(e.size() + 1);
      probs.resize(e.size() + 1);
      for (int f : gen[n]) {
        double z = probs[0] = model.T(Vocab::kNull, f);
        for (size_t i = 0; i < e.size(); ++i) {
          probs[i + 1] = model.T(e[i], f);
          z += probs[i + 1];
        }
        ll += SafeLog(z * norm);
        if (!(z > 0.0)) continue;
        counts[AlignModel::Key(Vocab::kNull, f)] += probs[0] / z;
        for (size_t i = 0; i < e.size(); ++i) {
          counts[AlignModel::Key(e[i], f)] += probs[i + 1] / z;
        }
      }
    }
    if (log != nullptr) log->push_back(ll);
    NormalizeRows(counts, &model);
  }
  return model;
}

double HmmLogLikelihood(const std::vector<int>& emit,
                        const std::vector<int>& gen, const AlignModel& model) {
  return ForwardBackward(emit, gen, model, nullptr);
}

void TrainHmmEm(const Sentences& emit, const Sentences& gen, int iters,
                AlignModel* model, std::vector<double>* log) {
  if (iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "HMM iterations must be >= 1");
  }
  for (int it = 0; it < iters; ++it) {
    HmmCounts counts;
    double ll = 0.0;
    for (size_t n = 0; n < emit.size(); ++n) {
      ll += ForwardBackward(emit[n], gen[n], *model, &counts);
    }
    if (log != nullptr) log->push_back(ll);
    NormalizeRows(counts.lex, model);
    double z = 0.0;
    for (double c : counts.jump) z += c;
    if (z > 0.0) {
      for (int b = 0; b < kJumpBins; ++b) model->jump[b] = counts.jump[b] / z;
    }
  }
}

std::vector<int> ViterbiAlign(const std::vector<int>& emit,
                              const std::vector<int>& gen,
                              const AlignModel& model) {
  const int I = static_cast<int>(emit.size());
  const int J = static_cast<int>(gen.size());
  std::vector<int> path(J, -1);
  if (I == 0 || J == 0) return path;
  const int S = 2 * I;
  const double p0 = model.p_null;
  const double lp0 = SafeLog(p0);
  const std::vector<double> b = Emissions(emit, gen, model);
  std::vector<double> lj(2 * I + 1);
  for (int d = -I; d <= I; ++d) {
    lj[d + I] = SafeLog((1.0 - p0) * model.Jump(d));
  }
  std::vector<double> delta(static_cast<size_t>(J) * S, kNegInf);
  std::vector<int> back(static_cast<size_t>(J) * S, -1);
  for (int s = 0; s < I; ++s) delta[s] = lj[s + 1 + I] + SafeLog(b[s]);
  delta[I] = lp0 + SafeLog(b[I]);

  std::vector<double> best(I);
  std::vector<int> arg(I);
  for (int j = 1; j < J; ++j) {
    const double* prev = &delta[static_cast<size_t>(j - 1) * S];
    double* cur = &delta[static_cast<size_t>(j) * S];
    int* bk = &back[static_cast<size_t>(j) * S];
    const double* bj = &b[static_cast<size_t>(j) * S];
    for (int p = 0; p < I; ++p) {
      if (prev[I + p] > prev[p]) {
        best[p] = prev[I + p];
        arg[p] = I + p;
      } else {
        best[p] = prev[p];
        arg[p] = p;
      }
    }
    for (int s = 0; s < I; ++s) {
      double m = kNegInf;
      int a = arg[0];
      for (int p = 0; p < I; ++p) {
        const double v = best[p] + lj[s - p + I];
        if (v > m) {
          m = v;
          a = arg[p];
        }
      }
      cur[s] = m + SafeLog(bj[s]);
      bk[s] = a;
      cur[I + s] = best[s] + lp0 + SafeLog(bj[I + s]);
      bk[I + s] = arg[s];
    }
  }
  const double* last = &delta[static_cast<size_t>(J - 1) * S];
  int s = 0;
  for (int k = 1; k < S; ++k) {
    if (last[k] > last[s]) s = k;
  }
  for (int j = J - 1; j >= 0; --j) {
    path[j] = s < I ? s : -1;
    if (j > 0) s = back[static_cast<size_t>(j) * S + s];
  }
  return path;
}

double PathLogProb(const std::vector<int>& emit, const std::vector<int>& gen,
                   const std::vector<int>& path, const AlignModel& model) {
  double lp = 0.0;
  int cp = -1;
  for (size_t j = 0; j < gen.size(); ++j) {
    if (path[j] >= 0) {
      lp += SafeLog((1.0 - model.p_null) * model.Jump(path[j] - cp));
      lp += SafeLog(model.T(emit[path[j]], gen[j]));
      cp = path[j];
    } else {
      lp += SafeLog(model.p_null) + SafeLog(model.T(Vocab::kNull, gen[j]));
      if (cp < 0) cp = 0;
    }
  }
  return lp;
}

double MeanLinkCost(const std::vector<int>& emit, const std::vector<int>& gen,
                    const std::vector<int>& path, const AlignModel& model) {
  if (gen.empty()) return std::numeric_limits<double>::infinity();
  double cost = 0.0;
  int cp = -1;
  for (size_t j = 0; j < gen.size(); ++j) {
    if (path[j] >= 0) {
      cost -= SafeLog(model.T(emit[path[j]], gen[j]) * model.Jump(path[j] - cp));
      cp = path[j];
    } else {
      cost -= SafeLog(model.T(Vocab::kNull, gen[j]) * model.p_null);
      if (cp < 0) cp = 0;
    }
  }
  return cost / static_cast<double>(gen.size());
}

AlignmentLinks GrowDiagFinalAnd(int src_len, int tgt_len,
                                const AlignmentLinks& fwd,
                                const AlignmentLinks& rev) {
  AlignmentLinks out;
  std::set<std::pair<int, int>> uni = fwd.links;
  uni.insert(rev.links.begin(), rev.links.end());
  for (const auto& l : fwd.links) {
    if (rev.links.count(l)) out.links.insert(l);
  }
  std::vector<char> src_al(src_len, 0), tgt_al(tgt_len, 0);
  auto add = [&](std::pair<int, int> l) {
    out.links.insert(l);
    src_al[l.first] = 1;
    tgt_al[l.second] = 1;
  };
  for (const auto& l : out.links) {
    src_al[l.first] = 1;
    tgt_al[l.second] = 1;
  }
  static constexpr int kNeighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0},  {0, 1},
                                           {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  bool added = true;
  while (added) {
    added = false;
    for (int i = 0; i < src_len; ++i) {
      for (int j = 0; j < tgt_len; ++j) {
        if (!out.links.count({i, j})) continue;
        for (const auto& nb : kNeighbors) {
          const int ni = i + nb[0], nj = j + nb[1];
          if (ni < 0 || nj < 0 || ni >= src_len || nj >= tgt_len) continue;
          if (src_al[ni] && tgt_al[nj]) continue;
          if (!uni.count({ni, nj})) continue;
          add({ni, nj});
          added = true;
        }
      }
    }
  }
  for (const auto* dir : {&fwd, &rev}) {
    for (const auto& l : dir->links) {
      if (!src_al[l.first] && !tgt_al[l.second]) add(l);
    }
  }
  return out;
}

PriorSet BuildPriors(const Corpus& corpus,
                     const std::vector<AlignmentLinks>& links, double alpha) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing alpha must be > 0");
  }
  PriorSet priors;
  priors.alpha = alpha;
  for (size_t n = 0; n < corpus.size() && n < links.size(); ++n) {
    const auto src = utf8::SplitWhitespace(corpus[n].src);
    const auto tgt = utf8::SplitWhitespace(corpus[n].tgt);
    std::vector<int> src_first(src.size(), -1), tgt_first(tgt.size(), -1);
    for (const auto& [i, j] : links[n].links) {
      if (i < 0 || j < 0 || i >= static_cast<int>(src.size()) ||
          j >= static_cast<int>(tgt.size())) {
        throw Error(ErrorCode::kInvalidArgument, "alignment link out of range");
      }
      priors.lexical_counts[{src[i], tgt[j]}] += 1.0;
      if (tgt_first[j] < 0 || i < tgt_first[j]) tgt_first[j] = i;
      if (src_first[i] < 0 || j < src_first[i]) src_first[i] = j;
    }
    for (size_t j = 0; j < tgt.size(); ++j) {
      if (tgt_first[j] < 0) priors.lexical_counts[{kNullWord, tgt[j]}] += 1.0;
    }
    for (size_t i = 0; i < src.size(); ++i) {
      if (src_first[i] < 0) priors.lexical_counts[{src[i], kNullWord}] += 1.0;
    }
    auto walk = [](const std::vector<int>& firsts,
                   std::array<double, kJumpBins>* hist) {
      int prev = -1;
      for (int pos : firsts) {
        if (pos < 0) continue;
        (*hist)[ClampJump(pos - prev) + kMaxJump] += 1.0;
        prev = pos;
      }
    };
    walk(tgt_first, &priors.jump_fwd);
    walk(src_first, &priors.jump_rev);
  }
  for (double& c : priors.jump_fwd) c += alpha;
  for (double& c : priors.jump_rev) c += alpha;
  return priors;
}

void PriorSet::Save(std::ostream& out) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", alpha);
  out << "#priors\talpha\t" << buf << '\n';
  for (const auto& [k, c] : lexical_counts) {
    std::snprintf(buf, sizeof(buf), "%.17g", c);
    out << k.first << '\t' << k.second << '\t' << buf << '\n';
  }
  for (const auto& [name, hist] :
       {std::pair<const char*, const std::array<double, kJumpBins>*>{
            "#jump_fwd", &jump_fwd},
        {"#jump_rev", &jump_rev}}) {
    out << name << '\n';
    for (int b = 0; b < kJumpBins; ++b) {
      std::snprintf(buf, sizeof(buf), "%.17g", (*hist)[b]);
      out << (b - kMaxJump) << '\t' << buf << '\n';
    }
  }
}

PriorSet PriorSet::Load(std::istream& in) {
  PriorSet p;
  std::string line;
  auto fail = [](const std::string& why) {
    return Error(ErrorCode::kModelLoadError, "priors: " + why);
  };
  if (!std::getline(in, line) || line.rfind("#priors\talpha\t", 0) != 0) {
    throw fail("missing header");
  }
  try {
    p.alpha = std::stod(line.substr(14));
  } catch (const std::exception&) {
    throw fail("bad alpha");
  }
  std::array<double, kJumpBins>* hist = nullptr;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "#jump_fwd") {
      hist = &p.jump_fwd;
      continue;
    }
    if (line == "#jump_rev") {
      hist = &p.jump_rev;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    try {
      if (hist == nullptr) {
        if (fields.size() != 3) throw fail("bad record: " + line);
        p.lexical_counts[{fields[0], fields[1]}] = std::stod(fields[2]);
      } else {
        if (fields.size() != 2) throw fail("bad jump record: " + line);
        const int d = std::stoi(fields[0]);
        if (d < -kMaxJump || d > kMaxJump) throw fail("jump out of range");
        (*hist)[d + kMaxJump] = std::stod(fields[1]);
      }
    } catch (const std::invalid_argument&) {
      throw fail("bad number: " + line);
    } catch (const std::out_of_range&) {
      throw fail("number out of range: " + line);
    }
  }
  for (const auto* h : {&p.jump_fwd, &p.jump_rev}) {
    double z = 0.0;
    for (double c : *h) z += c;
    if (!(z > 0.0)) throw fail("empty jump histogram");
  }
  return p;
}

AlignModel ModelFromPriors(const PriorSet& priors, AlignDirection direction) {
  if (priors.empty()) {
    throw Error(ErrorCode::kMissingPriors, "priors contain no lexical counts");
  }
  const bool fwd = direction == AlignDirection::kForward;
  AlignModel model;
  model.direction = direction;
  for (const auto& [k, c] : priors.lexical_counts) {
    (void)c;
    model.e_vocab.Add(fwd ? k.first : k.second);
    model.f_vocab.Add(fwd ? k.second : k.first);
  }
  const double alpha = priors.alpha;
  const double vf = model.f_vocab.size() - 1;
  std::vector<double> tot(model.e_vocab.size(), 0.0);
  std::vector<std::pair<std::pair<int, int>, double>> cells;
  for (const auto& [k, c] : priors.lexical_counts) {
    const int e = model.e_vocab.Find(fwd ? k.first : k.second);
    const int f = model.f_vocab.Find(fwd ? k.second : k.first);
    if (f == Vocab::kNull) continue;
    tot[e] += c;
    cells.push_back({{e, f}, c});
  }
  for (const auto& [ef, c] : cells) {
    model.SetT(ef.first, ef.second,
               (c + alpha) / (tot[ef.first] + alpha * vf));
  }
  for (int e = 0; e < model.e_vocab.size(); ++e) {
    if (tot[e] > 0.0) model.SetRowFloor(e, alpha / (tot[e] + alpha * vf));
  }
  model.set_uniform_floor(1.0 / vf);
  const auto& hist = fwd ? priors.jump_fwd : priors.jump_rev;
  double z = 0.0;
  for (double c : hist) z += c;
  for (int b = 0; b < kJumpBins; ++b) {
    model.jump[b] = z > 0.0 ? hist[b] / z : 1.0 / kJumpBins;
  }
  return model;
}

AlignTrainResult TrainAlign(const Corpus& clean, const AlignOptions& options) {
  if (options.iters_ibm1 < 1 || options.iters_hmm < 1) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  }
  Vocab src_vocab, tgt_vocab;
  Sentences src, tgt;
  std::vector<size_t> kept;
  for (size_t n = 0; n < clean.size(); ++n) {
    const auto s = utf8::SplitWhitespace(clean[n].src);
    const auto t = utf8::SplitWhitespace(clean[n].tgt);
    if (s.empty() || t.empty()) continue;
    std::vector<int> si, ti;
    for (const auto& w : s) si.push_back(src_vocab.Add(w));
    for (const auto& w : t) ti.push_back(tgt_vocab.Add(w));
    src.push_back(std::move(si));
    tgt.push_back(std::move(ti));
    kept.push_back(n);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no non-empty pairs to align");
  }

  AlignTrainResult r;
  r.fwd = TrainIbm1(src, tgt, src_vocab, tgt_vocab, options.iters_ibm1,
                    &r.log.ibm1_fwd);
  r.fwd.direction = AlignDirection::kForward;
  r.rev = TrainIbm1(tgt, src, tgt_vocab, src_vocab, options.iters_ibm1,
                    &r.log.ibm1_rev);
  r.rev.direction = AlignDirection::kReverse;

  if (options.sampler == Sampler::kEm) {
    TrainHmmEm(src, tgt, options.iters_hmm, &r.fwd, &r.log.hmm_fwd);
    TrainHmmEm(tgt, src, options.iters_hmm, &r.rev, &r.log.hmm_rev);
    if (options.fertility) {
      CollectFertility(src, tgt, &r.fwd);
      CollectFertility(tgt, src, &r.rev);
    }
  } else {
    AlignOptions fo = options;
    GibbsTrainer(src, tgt, &r.fwd, fo).Run(options.iters_hmm, &r.log.hmm_fwd);
    fo.seed = SplitMix(options.seed);
    GibbsTrainer(tgt, src, &r.rev, fo).Run(options.iters_hmm, &r.log.hmm_rev);
  }

  r.symmetrized.assign(clean.size(), {});
  for (size_t k = 0; k < kept.size(); ++k) {
    const auto fp = ViterbiAlign(src[k], tgt[k], r.fwd);
    const auto rp = ViterbiAlign(tgt[k], src[k], r.rev);
    r.symmetrized[kept[k]] = GrowDiagFinalAnd(
        static_cast<int>(src[k].size()), static_cast<int>(tgt[k].size()),
        LinksFromPath(fp, true), LinksFromPath(rp, false));
  }
  r.priors = BuildPriors(clean, r.symmetrized, options.alpha);
  return r;
}

AlignScorer::AlignScorer(const PriorSet& priors, ScoreOptions options)
    : fwd_(ModelFromPriors(priors, AlignDirection::kForward)),
      rev_(ModelFromPriors(priors, AlignDirection::kReverse)),
      options_(options) {}

double AlignScorer::Score(const SentencePair& pair) const {
  const auto s = utf8::SplitWhitespace(pair.src);
  const auto t = utf8::SplitWhitespace(pair.tgt);
  if (s.empty() || t.empty()) return std::numeric_limits<double>::infinity();
  double worst = kNegInf;
  int dir = 0;
  for (const AlignModel* m : {&fwd_, &rev_}) {
    const bool fwd = m == &fwd_;
    const auto emit = Encode(fwd ? s : t, m->e_vocab);
    const auto gen = Encode(fwd ? t : s, m->f_vocab);
    auto path = ViterbiAlign(emit, gen, *m);
    if (options_.sampler == Sampler::kGibbs) {
      std::mt19937_64 rng(SplitMix(options_.seed ^ SplitMix(pair.line_no)) +
                          static_cast<uint64_t>(dir));
      path = OneGibbsSweep(emit, gen, std::move(path), *m, rng);
    }
    worst = std::max(worst, MeanLinkCost(emit, gen, path, *m));
    ++dir;
  }
  return worst;
}

std::vector<double> ScorePairs(const Corpus& noisy, const PriorSet& priors,
                               const ScoreOptions& options) {
  const AlignScorer scorer(priors, options);
  std::vector<double> out;
  out.reserve(noisy.size());
  for (const auto& p : noisy.pairs()) out.push_back(scorer.Score(p));
  return out;
}

}  // namespace bitext
