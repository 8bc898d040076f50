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

#include "bitextclean/heuristics.h"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "bitextclean/error.h"
#include "bitextclean/utf8.h"

namespace bitext {

void HeuristicConfig::Validate() const {
  if (max_len_ratio < 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "max_len_ratio must be >= 1");
  }
  if (min_words < 0 || max_words < 1 || min_words > max_words) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 <= min_words <= max_words, max_words >= 1");
  }
  if (max_word_chars < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_word_chars must be >= 1");
  }
}

HeuristicConfig DefaultHeuristicConfig(std::string_view dataset) {
  std::string name = utf8::ToLower(dataset);
  HeuristicConfig cfg;
  if (name == "commoncrawl" || name == "paracrawl" || name == "rapid") {
    cfg.max_len_ratio = 3.0;
    cfg.min_words = 4;
  } else if (name == "wikititles") {
    cfg.max_len_ratio = 2.0;
    cfg.min_words = 0;
  } else if (name == "other" || name == "europarl" ||
             name == "newscommentary" || name == "news-commentary" ||
             name == "news" || name == "newstest" ||
             name == "backtranslation") {
    cfg.max_len_ratio = 9.0;
    cfg.min_words = 0;
  } else {
    throw Error(ErrorCode::kUnknownDataset, std::string(dataset));
  }
  cfg.max_words = 100;
  cfg.max_word_chars = 40;
  return cfg;
}

std::string_view RuleName(HeuristicRule rule) {
  switch (rule) {
    case HeuristicRule::kLenRatio: return "len_ratio";
    case HeuristicRule::kMinWords: return "min_words";
    case HeuristicRule::kMaxWords: return "max_words";
    case HeuristicRule::kLongWord: return "long_word";
    case HeuristicRule::kHtmlTag: return "html_tag";
    case HeuristicRule::kEntity: return "entity";
    case HeuristicRule::kEmpty: return "empty";
    case HeuristicRule::kNumber: return "number";
    case HeuristicRule::kPunct: return "punct";
  }
  return "";
}

std::optional<HeuristicRule> ParseRuleName(std::string_view name) {
  for (size_t i = 0; i < kNumHeuristicRules; ++i) {
    const auto r = static_cast<HeuristicRule>(i);
    if (RuleName(r) == name) return r;
  }
  return std::nullopt;
}

bool HeuristicOutcome::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const RuleVerdict& v) { return v.pass; });
}

bool HeuristicOutcome::Rejected(HeuristicRule rule) const {
  for (const auto& v : verdicts) {
    if (v.rule == rule) return !v.pass;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Entities

namespace {

const std::unordered_map<std::string_view, char32_t>& EntityTable() {
  static const auto* kTable = [] {
    auto* t = new std::unordered_map<std::string_view, char32_t>{
        {"quot", 34}, {"amp", 38}, {"apos", 39}, {"lt", 60}, {"gt", 62},
        {"OElig", 338}, {"oelig", 339}, {"Scaron", 352}, {"scaron", 353},
        {"Yuml", 376}, {"fnof", 402}, {"circ", 710}, {"tilde", 732},
        {"thetasym", 977}, {"upsih", 978}, {"piv", 982}, {"ensp", 8194},
        {"emsp", 8195}, {"thinsp", 8201}, {"zwnj", 8204}, {"zwj", 8205},
        {"lrm", 8206}, {"rlm", 8207}, {"ndash", 8211}, {"mdash", 8212},
        {"lsquo", 8216}, {"rsquo", 8217}, {"sbquo", 8218}, {"ldquo", 8220},
        {"rdquo", 8221}, {"bdquo", 8222}, {"dagger", 8224},
        {"Dagger", 8225}, {"bull", 8226}, {"hellip", 8230},
        {"permil", 8240}, {"prime", 8242}, {"Prime", 8243},
        {"lsaquo", 8249}, {"rsaquo", 8250}, {"oline", 8254},
        {"frasl", 8260}, {"euro", 8364}, {"image", 8465},
        {"weierp", 8472}, {"real", 8476}, {"trade", 8482},
        {"alefsym", 8501}, {"larr", 8592}, {"uarr", 8593}, {"rarr", 8594},
        {"darr", 8595}, {"harr", 8596}, {"crarr", 8629}, {"lArr", 8656},
        {"uArr", 8657}, {"rArr", 8658}, {"dArr", 8659}, {"hArr", 8660},
        {"forall", 8704}, {"part", 8706}, {"exist", 8707}, {"empty", 8709},
        {"nabla", 8711}, {"isin", 8712}, {"notin", 8713}, {"ni", 8715},
        {"prod", 8719}, {"sum", 8721}, {"minus", 8722}, {"lowast", 8727},
        {"radic", 8730}, {"prop", 8733}, {"infin", 8734}, {"ang", 8736},
        {"and", 8743}, {"or", 8744}, {"cap", 8745}, {"cup", 8746},
        {"int", 8747}, {"there4", 8756}, {"sim", 8764}, {"cong", 8773},
        {"asymp", 8776}, {"ne", 8800}, {"equiv", 8801}, {"le", 8804},
        {"ge", 8805}, {"sub", 8834}, {"sup", 8835}, {"nsub", 8836},
        {"sube", 8838}, {"supe", 8839}, {"oplus", 8853}, {"otimes", 8855},
        {"perp", 8869}, {"sdot", 8901}, {"lceil", 8968}, {"rceil", 8969},
        {"lfloor", 8970}, {"rfloor", 8971}, {"lang", 9001}, {"rang", 9002},
        {"loz", 9674}, {"spades", 9824}, {"clubs", 9827}, {"hearts", 9829},
        {"diams", 9830}};
    // Latin-1 block, U+00A0..U+00FF in code point order.
    static constexpr std::string_view kLatin1[] = {
        "nbsp", "iexcl", "cent", "pound", "curren", "yen", "brvbar",
        "sect", "uml", "copy", "ordf", "laquo", "not", "shy", "reg", "macr",
        "deg", "plusmn", "sup2", "sup3", "acute", "micro", "para", "middot",
        "cedil", "sup1", "ordm", "raquo", "frac14", "frac12", "frac34",
        "iquest", "Agrave", "Aacute", "Acirc", "Atilde", "Auml", "Aring",
        "AElig", "Ccedil", "Egrave", "Eacute", "Ecirc", "Euml", "Igrave",
        "Iacute", "Icirc", "Iuml", "ETH", "Ntilde", "Ograve", "Oacute",
        "Ocirc", "Otilde", "Ouml", "times", "Oslash", "Ugrave", "Uacute",
        "Ucirc", "Uuml", "Yacute", "THORN", "szlig", "agrave", "aacute",
        "acirc", "atilde", "auml", "aring", "aelig", "ccedil", "egrave",
        "eacute", "ecirc", "euml", "igrave", "iacute", "icirc", "iuml", "eth",
        "ntilde", "ograve", "oacute", "ocirc", "otilde", "ouml", "divide",
        "oslash", "ugrave", "uacute", "ucirc", "uuml", "yacute", "thorn",
        "yuml"};
    for (size_t i = 0; i < std::size(kLatin1); ++i) {
      (*t)[kLatin1[i]] = static_cast<char32_t>(0xA0 + i);
    }
    // Greek letters.
    static constexpr std::string_view kGreekUpper[] = {
        "Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta", "Eta",
        "Theta", "Iota", "Kappa", "Lambda", "Mu", "Nu", "Xi", "Omicron",
        "Pi", "Rho", "", "Sigma", "Tau", "Upsilon", "Phi", "Chi", "Psi",
        "Omega"};
    static constexpr std::string_view kGreekLower[] = {
        "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta",
        "theta", "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron",
        "pi", "rho", "sigmaf", "sigma", "tau", "upsilon", "phi", "chi",
        "psi", "omega"};
    for (size_t i = 0; i < std::size(kGreekUpper); ++i) {
      if (!kGreekUpper[i].empty()) {
        (*t)[kGreekUpper[i]] = static_cast<char32_t>(913 + i);
      }
      (*t)[kGreekLower[i]] = static_cast<char32_t>(945 + i);
    }
    return t;
  }();
  return *kTable;
}

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }
bool IsAsciiAlnum(char c) { return IsAsciiAlpha(c) || IsAsciiDigit(c); }

// Length of an entity-shaped token "&...;" starting at s[i], or 0.
size_t EntityLength(std::string_view s, size_t i) {
  if (s[i] != '&') return 0;
  size_t j = i + 1;
  if (j < s.size() && s[j] == '#') {
    ++j;
    const bool hex = j < s.size() && (s[j] == 'x' || s[j] == 'X');
    if (hex) ++j;
    const size_t start = j;
    while (j < s.size() &&
           (hex ? std::isxdigit(static_cast<unsigned char>(s[j])) != 0
                : IsAsciiDigit(s[j]))) {
      ++j;
    }
    if (j == start || j >= s.size() || s[j] != ';') return 0;
    return j + 1 - i;
  }
  if (j >= s.size() || !IsAsciiAlpha(s[j])) return 0;
  while (j < s.size() && IsAsciiAlnum(s[j])) ++j;
  if (j >= s.size() || s[j] != ';') return 0;
  return j + 1 - i;
}

}  // namespace

std::string DecodeEntities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const size_t len = s[i] == '&' ? EntityLength(s, i) : 0;
    if (len == 0) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view body = s.substr(i + 1, len - 2);
    char32_t cp = 0;
    if (body[0] == '#') {
      const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      const auto digits = body.substr(hex ? 2 : 1);
      uint64_t v = 0;
      for (char c : digits) {
        v = v * (hex ? 16 : 10) +
            (IsAsciiDigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
        if (v > 0x10FFFF) break;
      }
      if (v > 0 && v <= 0x10FFFF && !(v >= 0xD800 && v <= 0xDFFF)) {
        cp = static_cast<char32_t>(v);
      }
    } else if (auto it = EntityTable().find(body); it != EntityTable().end()) {
      cp = it->second;
    }
    if (cp == 0) {
      out.append(s.substr(i, len));
    } else {
      utf8::Append(&out, cp);
    }
    i += len;
  }
  return out;
}

bool HasEntityResidue(std::string_view s) {
  for (size_t i = s.find('&'); i != std::string_view::npos;
       i = s.find('&', i + 1)) {
    if (EntityLength(s, i) > 0) return true;
  }
  return false;
}

bool HasHtmlTag(std::string_view s) {
  for (size_t i = s.find('<'); i != std::string_view::npos;
       i = s.find('<', i + 1)) {
    if (i + 1 >= s.size()) return false;
    const char c = s[i + 1];
    if (IsAsciiAlpha(c) || c == '!' || c == '/') {
      if (s.find('>', i + 2) != std::string_view::npos) return true;
    }
  }
  return false;
}

std::vector<std::string> NonZeroDigitRuns(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    if (!IsAsciiDigit(s[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < s.size() && IsAsciiDigit(s[j])) ++j;
    size_t k = i;
    while (k < j && s[k] == '0') ++k;
    if (k < j) out.emplace_back(s.substr(k, j - k));
    i = j;
  }
  return out;
}

TerminalPunct TerminalPunctuation(std::string_view s) {
  size_t end = s.size();
  while (end > 0 && (s[end - 1] == ' ' || s[end - 1] == '\t')) --end;
  // Skip closing quotes and brackets.
  while (end > 0) {
    const char c = s[end - 1];
    if (c == '"' || c == '\'' || c == ')' || c == ']') {
      --end;
      continue;
    }
    const auto tail = s.substr(0, end);
    if (tail.ends_with("\xC2\xBB") || tail.ends_with("\xE2\x80\x9D") ||
        tail.ends_with("\xE2\x80\x99")) {
      end -= tail.ends_with("\xC2\xBB") ? 2 : 3;
      continue;
    }
    break;
  }
  const auto t = s.substr(0, end);
  if (t.ends_with("...") || t.ends_with("\xE2\x80\xA6")) {
    return TerminalPunct::kEllipsis;
  }
  if (t.empty()) return TerminalPunct::kNone;
  switch (t.back()) {
    case '.': return TerminalPunct::kPeriod;
    case '!': return TerminalPunct::kExclaim;
    case '?': return TerminalPunct::kQuestion;
    case ':': return TerminalPunct::kColon;
    case ';': return TerminalPunct::kSemicolon;
    default: return TerminalPunct::kNone;
  }
}

HeuristicOutcome CheckPair(const SentencePair& pair,
                           const HeuristicConfig& cfg) {
  HeuristicOutcome o;
  bool entity_reject = false;
  if (cfg.decode_entities) {
    o.src = DecodeEntities(pair.src);
    o.tgt = DecodeEntities(pair.tgt);
    entity_reject = HasEntityResidue(o.src) || HasEntityResidue(o.tgt);
  } else {
    o.src = pair.src;
    o.tgt = pair.tgt;
  }
  const auto ws = utf8::SplitWhitespaceView(o.src);
  const auto wt = utf8::SplitWhitespaceView(o.tgt);
  const size_t ns = ws.size();
  const size_t nt = wt.size();
  const bool any_empty = ns == 0 || nt == 0;

  auto add = [&](HeuristicRule r, bool pass) { o.verdicts.push_back({r, pass}); };

  // Rules comparing the two sides only apply when both sides have words.
  const double ratio =
      any_empty ? 1.0
                : static_cast<double>(std::max(ns, nt)) /
                      static_cast<double>(std::min(ns, nt));
  add(HeuristicRule::kLenRatio, ratio <= cfg.max_len_ratio);
  add(HeuristicRule::kMinWords,
      any_empty || (ns >= static_cast<size_t>(cfg.min_words) &&
                    nt >= static_cast<size_t>(cfg.min_words)));
  add(HeuristicRule::kMaxWords, ns <= static_cast<size_t>(cfg.max_words) &&
                                    nt <= static_cast<size_t>(cfg.max_words));
  auto long_word = [&](const std::vector<std::string_view>& words) {
    return std::any_of(words.begin(), words.end(), [&](std::string_view w) {
      return w.size() >= static_cast<size_t>(cfg.max_word_chars) &&
             utf8::Length(w) >= static_cast<size_t>(cfg.max_word_chars);
    });
  };
  add(HeuristicRule::kLongWord, !long_word(ws) && !long_word(wt));
  if (cfg.strip_html) {
    add(HeuristicRule::kHtmlTag, !HasHtmlTag(o.src) && !HasHtmlTag(o.tgt));
  }
  if (cfg.decode_entities) add(HeuristicRule::kEntity, !entity_reject);
  if (cfg.drop_empty) add(HeuristicRule::kEmpty, !any_empty);
  if (cfg.require_digit_match) {
    add(HeuristicRule::kNumber,
        any_empty || NonZeroDigitRuns(o.src) == NonZeroDigitRuns(o.tgt));
  }
  if (cfg.require_punct_match) {
    add(HeuristicRule::kPunct,
        any_empty || TerminalPunctuation(o.src) == TerminalPunctuation(o.tgt));
  }
  return o;
}

}  // namespace bitext
