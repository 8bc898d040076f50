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

#include "bitextclean/textnorm.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {

Language ParseLanguage(std::string_view code) {
  if (code == "en") return Language::kEnglish;
  if (code == "de") return Language::kGerman;
  if (code == "fi") return Language::kFinnish;
  return Language::kOther;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Wide and CJK punctuation to ASCII.
std::u32string_view ReplaceUnicodePunct(char32_t cp) {
  switch (cp) {
    case 0xFF0C: case 0x3001: return U",";
    case 0x3002: case 0xFF0E: return U".";
    case 0x201D: case 0x201C: case 0x300A: case 0x300B: case 0x300C:
    case 0x300D: return U"\"";
    case 0x2236: case 0xFF1A: return U":";
    case 0xFF1F: return U"?";
    case 0xFF09: return U")";
    case 0xFF08: return U"(";
    case 0xFF01: return U"!";
    case 0xFF1B: return U";";
    case 0xFF5E: return U"~";
    case 0x2019: return U"'";
    case 0x2026: return U"...";
    case 0x2501: return U"-";
    case 0x3008: return U"<";
    case 0x3009: return U">";
    case 0x3010: return U"[";
    case 0x3011: return U"]";
    case 0xFF05: return U"%";
    default: return {};
  }
}

bool IsNonPrinting(char32_t cp) {
  if (cp == '\t') return false;
  if (cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F)) return true;
  return cp == 0xAD || (cp >= 0x200B && cp <= 0x200F) ||
         (cp >= 0x202A && cp <= 0x202E) || (cp >= 0x2060 && cp <= 0x2064) ||
         cp == 0xFEFF;
}

}  // namespace

std::string Normalize(std::string_view line) {
  const std::u32string in = utf8::Decode(line);

  std::u32string a;
  a.reserve(in.size());
  for (char32_t cp : in) {
    if (cp >= 0xFF10 && cp <= 0xFF19) {
      a.push_back(cp - 0xFF10 + '0');
    } else if ((cp >= 0xFF21 && cp <= 0xFF3A) || (cp >= 0xFF41 && cp <= 0xFF5A)) {
      a.push_back(cp - 0xFEE0);
    } else if (auto r = ReplaceUnicodePunct(cp); !r.empty()) {
      a.append(r);
    } else if (!IsNonPrinting(cp)) {
      a.push_back(cp);
    }
  }

  std::u32string b;
  b.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const char32_t cp = a[i];
    switch (cp) {
      case '`': case 0xB4: case 0x2018: case 0x201A:
        b.push_back('\'');
        break;
      case 0x201E: case 0xAB: case 0xBB:
        b.push_back('"');
        break;
      case 0x2013:
        b.push_back('-');
        break;
      case 0x2014:
        b.append(U" - ");
        break;
      default:
        if (utf8::IsSpace(cp) && cp != '\t') {
          b.push_back(' ');
        } else {
          b.push_back(cp);
        }
    }
  }

  // '' -> " after the backtick mapping, then collapse spaces and trim.
  std::u32string c;
  c.reserve(b.size());
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i] == '\'' && i + 1 < b.size() && b[i + 1] == '\'') {
      c.push_back('"');
      ++i;
    } else if (b[i] == ' ' && !c.empty() && c.back() == ' ') {
      continue;
    } else {
      c.push_back(b[i]);
    }
  }
  size_t begin = 0;
  size_t end = c.size();
  auto blank = [](char32_t cp) { return cp == ' ' || cp == '\t'; };
  while (begin < end && blank(c[begin])) ++begin;
  while (end > begin && blank(c[end - 1])) --end;
  return utf8::Encode(std::u32string_view(c).substr(begin, end - begin));
}

// ---------------------------------------------------------------------------
// Tokenization

namespace {

const std::unordered_set<std::string>& NonbreakingPrefixes() {
  static const std::unordered_set<std::string> kSet = {
      "Mr", "Mrs", "Ms", "Dr", "Prof", "St", "Jr", "Sr", "Sen", "Rep", "Gov",
      "Gen", "Col", "Lt", "Sgt", "Capt", "Mt", "vs", "etc", "cf", "approx",
      "Inc", "Ltd", "Co", "Corp", "Jan", "Feb", "Mar", "Apr", "Jun", "Jul",
      "Aug", "Sep", "Sept", "Oct", "Nov", "Dec", "No", "Nr", "Art", "Abs",
      "bzw", "ca", "vgl", "z", "evt", "esim", "ks", "mm", "yms", "jne"};
  return kSet;
}

struct TokenizerState {
  std::vector<std::string> out;
  std::u32string cur;

  void Flush() {
    if (!cur.empty()) out.push_back(utf8::Encode(cur));
    cur.clear();
  }
  void Emit(std::u32string_view tok) {
    Flush();
    out.push_back(utf8::Encode(tok));
  }
};

bool AllUpperSingleLetter(std::u32string_view s) {
  return s.size() == 1 && utf8::IsLetter(s[0]) && utf8::IsUpper(s[0]);
}

bool HasLetter(std::u32string_view s) {
  return std::any_of(s.begin(), s.end(), utf8::IsLetter);
}

// Splits a trailing period off a word unless it marks an abbreviation.
void FinishWord(TokenizerState* st, bool last_chunk, bool next_lower) {
  auto& w = st->cur;
  if (w.size() > 1 && w.back() == '.') {
    std::u32string_view pre(w.data(), w.size() - 1);
    const bool dotted = pre.find('.') != std::u32string_view::npos &&
                        HasLetter(pre);
    const bool prefix = NonbreakingPrefixes().count(utf8::Encode(pre)) > 0 ||
                        AllUpperSingleLetter(pre);
    const bool keep =
        !last_chunk && (dotted || prefix || (next_lower && HasLetter(pre)));
    if (!keep) {
      w.pop_back();
      st->Flush();
      st->out.emplace_back(".");
      return;
    }
  }
  st->Flush();
}

void TokenizeChunk(std::u32string_view c, Language lang, bool last_chunk,
                   bool next_lower, TokenizerState* st) {
  const size_t n = c.size();
  auto at = [&](size_t k) -> char32_t { return k < n ? c[k] : 0; };
  for (size_t k = 0; k < n; ++k) {
    const char32_t ch = c[k];
    const char32_t prev = k > 0 ? c[k - 1] : 0;
    const char32_t next = at(k + 1);
    if (utf8::IsAlnum(ch)) {
      st->cur.push_back(ch);
      continue;
    }
    if (ch == '.') {
      if (next == '.') {
        size_t j = k;
        while (j < n && c[j] == '.') ++j;
        FinishWord(st, false, false);
        st->Emit(c.substr(k, j - k));
        k = j - 1;
        continue;
      }
      if (!st->cur.empty() && utf8::IsAlnum(next)) {
        st->cur.push_back(ch);
        continue;
      }
      if (!st->cur.empty() && k + 1 == n) {
        st->cur.push_back(ch);  // decided in FinishWord
        continue;
      }
      FinishWord(st, false, false);
      st->Emit(U".");
      continue;
    }
    if (ch == ',' && utf8::IsDigit(prev) && utf8::IsDigit(next) &&
        !st->cur.empty()) {
      st->cur.push_back(ch);
      continue;
    }
    if (ch == '-') {
      if (!st->cur.empty() && utf8::IsAlnum(prev) && utf8::IsAlnum(next)) {
        st->cur.push_back(ch);
        continue;
      }
      size_t j = k;
      while (j < n && c[j] == '-') ++j;
      FinishWord(st, false, false);
      st->Emit(c.substr(k, j - k));
      k = j - 1;
      continue;
    }
    if (ch == '\'') {
      const bool letter_prev = utf8::IsLetter(prev) && !st->cur.empty();
      if (lang == Language::kEnglish) {
        if (letter_prev && (next == 't' || next == 'T') &&
            (prev == 'n' || prev == 'N') && !utf8::IsLetter(at(k + 2)) &&
            st->cur.size() > 1) {
          st->cur.pop_back();
          st->Flush();
          st->cur.push_back(prev);
          st->cur.push_back(ch);
          continue;
        }
        if ((letter_prev && utf8::IsLetter(next)) ||
            (utf8::IsDigit(prev) && !st->cur.empty() &&
             (next == 's' || next == 'S') && !utf8::IsLetter(at(k + 2)))) {
          st->Flush();
          st->cur.push_back(ch);
          continue;
        }
      } else if (lang == Language::kFinnish) {
        if (!st->cur.empty() && utf8::IsAlnum(prev) && utf8::IsLetter(next)) {
          st->cur.push_back(ch);
          continue;
        }
      }
      FinishWord(st, false, false);
      st->Emit(U"'");
      continue;
    }
    if (ch == ':' && lang == Language::kFinnish && !st->cur.empty() &&
        utf8::IsAlnum(prev) && utf8::IsLetter(next)) {
      st->cur.push_back(ch);
      continue;
    }
    FinishWord(st, false, false);
    st->Emit(c.substr(k, 1));
  }
  FinishWord(st, last_chunk, next_lower);
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view line, Language lang) {
  TokenizerState st;
  const auto chunks = utf8::SplitWhitespaceView(line);
  std::vector<std::u32string> decoded;
  decoded.reserve(chunks.size());
  for (auto ch : chunks) decoded.push_back(utf8::Decode(ch));
  for (size_t i = 0; i < decoded.size(); ++i) {
    const bool last = i + 1 == decoded.size();
    const bool next_lower = !last && !decoded[i + 1].empty() &&
                            utf8::IsLower(decoded[i + 1][0]);
    TokenizeChunk(decoded[i], lang, last, next_lower, &st);
  }
  return std::move(st.out);
}

namespace {

bool AttachesLeft(std::string_view t) {
  static const std::unordered_set<std::string_view> kSet = {
      ",", ".", "!", "?", ";", ":", ")", "]", "}", "%", "...", "n't", "N'T"};
  if (kSet.count(t)) return true;
  // Clitics such as 's 're 'll.
  return t.size() >= 2 && t[0] == '\'' &&
         std::all_of(t.begin() + 1, t.end(), [](char c) {
           return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
         });
}

bool AttachesRight(std::string_view t) {
  return t == "(" || t == "[" || t == "{" || t == "\xC2\xBF" ||
         t == "\xC2\xA1";
}

}  // namespace

std::string Detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  bool glue_next = true;  // no space before the first token
  bool quote_open[2] = {false, false};
  for (const auto& t : tokens) {
    bool space = !glue_next;
    bool glue_after = false;
    const int q = t == "\"" ? 0 : (t == "'" ? 1 : -1);
    if (q >= 0) {
      if (quote_open[q]) {
        space = false;
        quote_open[q] = false;
      } else {
        glue_after = true;
        quote_open[q] = true;
      }
    } else if (AttachesLeft(t)) {
      space = false;
    } else if (AttachesRight(t)) {
      glue_after = true;
    }
    if (space && !out.empty()) out.push_back(' ');
    out.append(t);
    glue_next = glue_after;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contractions

namespace {

bool IsAllUpper(std::string_view s) {
  bool any = false;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') any = true;
  }
  return any;
}

std::string MatchCase(std::string_view model, std::string expansion) {
  if (IsAllUpper(model) && model.size() > 1) {
    for (auto& c : expansion) c = static_cast<char>(std::toupper(c));
  } else {
    // Capitalize when the first letter of the model is uppercase.
    for (char c : model) {
      if (c >= 'A' && c <= 'Z') {
        expansion[0] = static_cast<char>(std::toupper(expansion[0]));
        break;
      }
      if (c >= 'a' && c <= 'z') break;
    }
  }
  return expansion;
}

}  // namespace

ContractionTable::ContractionTable() {
  rules_["'re"] = {{"are", {}}};
  rules_["'ll"] = {{"will", {}}};
  rules_["'ve"] = {{"have", {}}};
  rules_["'m"] = {{"am", {}}};
  rules_["n't"] = {{"not", {}}};
  rules_["'s"] = {{"is", {"it", "he", "she", "that", "what", "there"}},
                  {"us", {"let"}}};
}

ContractionTable ContractionTable::FromTsv(std::istream& in) {
  ContractionTable t;
  t.rules_.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2) {
      throw Error(ErrorCode::kModelLoadError, "bad contraction line: " + line);
    }
    Rule r{cols[1], {}};
    if (cols.size() > 2) {
      size_t s = 0;
      while (s <= cols[2].size()) {
        const size_t comma = cols[2].find(',', s);
        auto w = cols[2].substr(s, comma - s);
        if (!w.empty()) r.after.push_back(utf8::ToLower(w));
        if (comma == std::string::npos) break;
        s = comma + 1;
      }
    }
    t.rules_[cols[0]].push_back(std::move(r));
  }
  return t;
}

std::vector<std::string> ContractionTable::Expand(
    const std::vector<std::string>& tokens) const {
  // Stems that change when followed by n't.
  static const std::unordered_map<std::string, std::string> kNegStems = {
      {"ca", "can"}, {"wo", "will"}, {"sha", "shall"}};
  std::vector<std::string> out;
  out.reserve(tokens.size() + 2);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const std::string lower = utf8::ToLower(tok);
    if (i + 1 < tokens.size() && utf8::ToLower(tokens[i + 1]) == "n't") {
      if (auto it = kNegStems.find(lower); it != kNegStems.end()) {
        out.push_back(MatchCase(tok, it->second));
        continue;
      }
    }
    auto it = rules_.find(lower);
    if (it == rules_.end()) {
      out.push_back(tok);
      continue;
    }
    const std::string prev = i > 0 ? utf8::ToLower(tokens[i - 1]) : "";
    const Rule* chosen = nullptr;
    for (const auto& r : it->second) {
      if (r.after.empty() ||
          std::find(r.after.begin(), r.after.end(), prev) != r.after.end()) {
        chosen = &r;
        break;
      }
    }
    if (!chosen || i == 0) {
      out.push_back(tok);
    } else {
      out.push_back(MatchCase(tok, chosen->expansion));
    }
  }
  return out;
}

std::vector<std::string> ExpandContractions(
    const std::vector<std::string>& tokens) {
  static const ContractionTable kTable;
  return kTable.Expand(tokens);
}

// ---------------------------------------------------------------------------
// Truecasing

namespace {

bool IsDelayedStart(std::string_view t) {
  return t == "(" || t == "[" || t == "\"" || t == "'" || t == "&apos;" ||
         t == "&quot;" || t == "&#91;" || t == "&#93;";
}

bool HasCasedLetter(std::string_view t) {
  size_t pos = 0;
  while (pos < t.size()) {
    const char32_t cp = utf8::Next(t, &pos);
    if (utf8::IsUpper(cp) || utf8::IsLower(cp)) return true;
  }
  return false;
}

}  // namespace

size_t SentenceInitialIndex(const std::vector<std::string>& tokens) {
  size_t i = 0;
  while (i < tokens.size() && IsDelayedStart(tokens[i])) ++i;
  return i;
}

TruecaseModel TruecaseModel::Train(const std::vector<std::string>& lines) {
  struct Form {
    std::string surface;
    int64_t medial = 0;
    int64_t initial = 0;
  };
  // key -> forms in first-seen order; keys also kept in first-seen order.
  std::unordered_map<std::string, std::vector<Form>> by_key;
  std::vector<std::string> key_order;
  bool any_token = false;
  for (const auto& line : lines) {
    const auto toks = utf8::SplitWhitespace(line);
    if (!toks.empty()) any_token = true;
    const size_t init = SentenceInitialIndex(toks);
    for (size_t i = 0; i < toks.size(); ++i) {
      if (!HasCasedLetter(toks[i])) continue;
      std::string key = utf8::ToLower(toks[i]);
      auto [it, inserted] = by_key.try_emplace(key);
      if (inserted) key_order.push_back(key);
      auto& forms = it->second;
      auto f = std::find_if(forms.begin(), forms.end(),
                            [&](const Form& x) { return x.surface == toks[i]; });
      if (f == forms.end()) {
        forms.push_back({toks[i], 0, 0});
        f = forms.end() - 1;
      }
      (i == init ? f->initial : f->medial) += 1;
    }
  }
  if (!any_token) throw Error(ErrorCode::kEmptyCorpus, "truecaser corpus");

  TruecaseModel m;
  for (const auto& key : key_order) {
    auto& forms = by_key[key];
    const bool medial_evidence = std::any_of(
        forms.begin(), forms.end(), [](const Form& f) { return f.medial > 0; });
    std::vector<std::pair<std::string, int64_t>> effective;
    for (const auto& f : forms) {
      const int64_t c = medial_evidence ? f.medial : f.initial;
      if (c > 0) effective.emplace_back(f.surface, c);
    }
    std::stable_sort(effective.begin(), effective.end(),
                     [](const auto& a, const auto& b) {
                       return a.second > b.second;
                     });
    m.best_form_[key] = effective.front().first;
    auto& fl = m.forms_[key];
    for (auto& [s, c] : effective) {
      m.counts_[s] = c;
      fl.push_back(s);
    }
  }
  return m;
}

TruecaseModel TruecaseModel::Load(std::istream& in) {
  TruecaseModel m;
  std::string line;
  size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kModelLoadError,
                  "truecase model line " + std::to_string(ln));
    }
    std::string surface = line.substr(0, tab);
    int64_t count = 0;
    try {
      count = std::stoll(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kModelLoadError,
                  "truecase model line " + std::to_string(ln));
    }
    std::string key = utf8::ToLower(surface);
    auto& fl = m.forms_[key];
    const auto best = m.best_form_.find(key);
    if (best == m.best_form_.end() || count > m.counts_[best->second]) {
      m.best_form_[key] = surface;
    }
    m.counts_[surface] = count;
    fl.push_back(std::move(surface));
  }
  return m;
}

void TruecaseModel::Save(std::ostream& out) const {
  std::vector<const std::string*> keys;
  keys.reserve(forms_.size());
  for (const auto& [k, v] : forms_) keys.push_back(&k);
  std::sort(keys.begin(), keys.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const auto* k : keys) {
    for (const auto& s : forms_.at(*k)) {
      out << s << '\t' << counts_.at(s) << '\n';
    }
  }
}

const std::string* TruecaseModel::BestForm(std::string_view key) const {
  auto it = best_form_.find(std::string(key));
  return it == best_form_.end() ? nullptr : &it->second;
}

int64_t TruecaseModel::Count(std::string_view surface) const {
  auto it = counts_.find(std::string(surface));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::string> Truecase(const std::vector<std::string>& tokens,
                                  const TruecaseModel& model) {
  std::vector<std::string> out = tokens;
  const size_t i = SentenceInitialIndex(tokens);
  if (i < out.size()) {
    if (const auto* best = model.BestForm(utf8::ToLower(out[i]))) {
      out[i] = *best;
    }
  }
  return out;
}

}  // namespace bitext
