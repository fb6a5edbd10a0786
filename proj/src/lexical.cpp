// Copyright 2026 The typoclust Authors.
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

#include "typoclust/lexical.hpp"

#include <algorithm>

#include "json.hpp"
#include "typoclust/error.hpp"
#include "typoclust/util.hpp"

namespace typoclust::lexical {

std::string_view to_string(PosCategory category) {
  switch (category) {
    case PosCategory::kNoun: return "NOUN";
    case PosCategory::kVerb: return "VERB";
    case PosCategory::kAdj: return "ADJ";
    case PosCategory::kOther: return "OTHER";
  }
  return "OTHER";
}

PosCategory map_tag(std::string_view tag) {
  if (tag == "NOUN" || tag.starts_with("NN")) return PosCategory::kNoun;
  if (tag == "VERB" || tag.starts_with("VB")) return PosCategory::kVerb;
  if (tag == "ADJ" || tag.starts_with("JJ")) return PosCategory::kAdj;
  return PosCategory::kOther;
}

namespace {

enum class UnitClass { kWord, kConnector, kBreak };

// Length of the UTF-8 sequence starting with this byte (1 for stray bytes).
std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0 && lead < 0xF8) return 4;
  if (lead >= 0xE0) return lead < 0xF0 ? 3 : 1;
  if (lead >= 0xC0) return 2;
  return 1;
}

UnitClass classify(std::string_view unit) {
  if (unit.size() == 1) {
    const char c = unit[0];
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
        (c >= '0' && c <= '9')) {
      return UnitClass::kWord;
    }
    if (c == '-' || c == '\'') return UnitClass::kConnector;
    return UnitClass::kBreak;
  }
  // Right single quotation mark doubles as an apostrophe.
  if (unit == "\xE2\x80\x99") return UnitClass::kConnector;
  static constexpr std::string_view kPunctuation[] = {
      "\xC2\xA0",      // no-break space
      "\xC2\xAB",      // «
      "\xC2\xBB",      // »
      "\xE2\x80\x93",  // en dash
      "\xE2\x80\x94",  // em dash
      "\xE2\x80\x98",  // left single quote
      "\xE2\x80\x9C",  // left double quote
      "\xE2\x80\x9D",  // right double quote
      "\xE2\x80\xA2",  // bullet
      "\xE2\x80\xA6",  // ellipsis
  };
  for (std::string_view p : kPunctuation) {
    if (unit == p) return UnitClass::kBreak;
  }
  return UnitClass::kWord;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  struct Unit {
    std::string_view bytes;
    UnitClass cls;
  };
  std::vector<Unit> units;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = utf8_length(static_cast<unsigned char>(text[i]));
    len = std::min(len, text.size() - i);
    const std::string_view unit = text.substr(i, len);
    units.push_back({unit, classify(unit)});
    i += len;
  }

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < units.size(); ++i) {
    switch (units[i].cls) {
      case UnitClass::kWord:
        current.append(units[i].bytes);
        break;
      case UnitClass::kConnector:
        if (!current.empty() && i + 1 < units.size() &&
            units[i + 1].cls == UnitClass::kWord) {
          current.append(units[i].bytes);
        } else {
          flush();
        }
        break;
      case UnitClass::kBreak:
        flush();
        break;
    }
  }
  flush();
  return tokens;
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lexicon;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto first = raw.find('\t');
    const auto second =
        first == std::string::npos ? first : raw.find('\t', first + 1);
    if (second == std::string::npos ||
        raw.find('\t', second + 1) != std::string::npos) {
      throw DataError("lexicon line " + std::to_string(line_no) +
                      ": expected surface<TAB>pos<TAB>lemma");
    }
    const std::string surface = trim(raw.substr(0, first));
    std::string tag = trim(raw.substr(first + 1, second - first - 1));
    std::string lemma = ascii_lower(trim(raw.substr(second + 1)));
    if (surface.empty() || tag.empty() || lemma.empty()) {
      throw DataError("lexicon line " + std::to_string(line_no) +
                      ": empty column");
    }
    lexicon.add(surface, std::move(tag), std::move(lemma));
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  try {
    return parse(read_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void Lexicon::add(std::string_view surface, std::string tag,
                  std::string lemma) {
  entries_.try_emplace(ascii_lower(surface),
                       Entry{std::move(tag), std::move(lemma)});
}

const Lexicon::Entry* Lexicon::find(std::string_view lowercase_surface) const {
  const auto it = entries_.find(std::string(lowercase_surface));
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

struct SuffixRule {
  std::string_view suffix;
  PosCategory category;
};

constexpr SuffixRule kSuffixRules[] = {
    {"tion", PosCategory::kNoun}, {"ment", PosCategory::kNoun},
    {"ity", PosCategory::kNoun},  {"ness", PosCategory::kNoun},
    {"er", PosCategory::kNoun},   {"ics", PosCategory::kNoun},
    {"ize", PosCategory::kVerb},  {"ate", PosCategory::kVerb},
    {"ify", PosCategory::kVerb},  {"ous", PosCategory::kAdj},
    {"ive", PosCategory::kAdj},   {"al", PosCategory::kAdj},
    {"able", PosCategory::kAdj},
};

std::optional<PosCategory> suffix_category(std::string_view word) {
  for (const SuffixRule& rule : kSuffixRules) {
    if (word.size() >= rule.suffix.size() + 2 && word.ends_with(rule.suffix)) {
      return rule.category;
    }
  }
  return std::nullopt;
}

std::string_view default_tag(PosCategory category, bool plural) {
  switch (category) {
    case PosCategory::kNoun: return plural ? "NNS" : "NN";
    case PosCategory::kVerb: return plural ? "VBZ" : "VB";
    case PosCategory::kAdj: return "JJ";
    case PosCategory::kOther: break;
  }
  return "UNK";
}

// Singular candidates for a word ending in "s", most specific first.
std::vector<std::string> singular_candidates(const std::string& word) {
  std::vector<std::string> out;
  if (word.size() <= 3 || word.back() != 's' || word.ends_with("ss")) {
    return out;
  }
  if (word.ends_with("ies")) out.push_back(word.substr(0, word.size() - 3) + "y");
  if (word.ends_with("es")) out.push_back(word.substr(0, word.size() - 2));
  out.push_back(word.substr(0, word.size() - 1));
  return out;
}

}  // namespace

TaggedToken FallbackTagger::tag_one(const std::string& token) const {
  const std::string lower = ascii_lower(token);
  if (const auto* entry = lexicon_.find(lower)) {
    return {token, entry->tag, map_tag(entry->tag), entry->lemma};
  }
  const auto singulars = singular_candidates(lower);
  for (const std::string& singular : singulars) {
    if (const auto* entry = lexicon_.find(singular)) {
      const PosCategory category = map_tag(entry->tag);
      std::string tag = category == PosCategory::kOther
                            ? entry->tag
                            : std::string(default_tag(category, true));
      return {token, std::move(tag), category, entry->lemma};
    }
  }
  if (const auto category = suffix_category(lower)) {
    return {token, std::string(default_tag(*category, false)), *category,
            lower};
  }
  // Plural of a word recognized by its noun suffix: "applications".
  for (const std::string& singular : singulars) {
    if (suffix_category(singular) == PosCategory::kNoun) {
      return {token, "NNS", PosCategory::kNoun, singular};
    }
  }
  return {token, "UNK", PosCategory::kOther, lower};
}

std::vector<TaggedToken> FallbackTagger::tag(
    std::span<const std::string> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) out.push_back(tag_one(token));
  return out;
}

TreeTaggerStream TreeTaggerStream::parse(std::string_view text) {
  std::vector<TaggedToken> stream;
  std::size_t line_no = 0;
  for (const std::string& line : split_lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    const auto first = line.find('\t');
    const auto second =
        first == std::string::npos ? first : line.find('\t', first + 1);
    if (second == std::string::npos ||
        line.find('\t', second + 1) != std::string::npos) {
      throw DataError("tagged stream line " + std::to_string(line_no) +
                      ": expected exactly three TAB-separated columns");
    }
    std::string surface = line.substr(0, first);
    std::string tag = line.substr(first + 1, second - first - 1);
    std::string lemma = line.substr(second + 1);
    if (surface.empty() || tag.empty()) {
      throw DataError("tagged stream line " + std::to_string(line_no) +
                      ": empty surface or tag");
    }
    if (lemma.empty() || lemma == "<unknown>") lemma = surface;
    const PosCategory pos = map_tag(tag);
    stream.push_back(
        {std::move(surface), std::move(tag), pos, ascii_lower(lemma)});
  }
  return TreeTaggerStream(std::move(stream));
}

TreeTaggerStream TreeTaggerStream::load(const std::filesystem::path& path) {
  try {
    return parse(read_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<TaggedToken> TreeTaggerStream::tag(
    std::span<const std::string> tokens) const {
  if (tokens.size() != stream_.size()) {
    throw TaggerStreamMismatch(
        "tagged stream has " + std::to_string(stream_.size()) +
        " tokens, expected " + std::to_string(tokens.size()));
  }
  return stream_;
}

std::string format_tagged_stream(std::span<const TaggedToken> tokens) {
  std::string out;
  for (const TaggedToken& t : tokens) {
    out += t.surface;
    out += '\t';
    out += t.tag;
    out += '\t';
    out += t.lemma;
    out += '\n';
  }
  return out;
}

std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens,
                                    const Tagger& tagger) {
  std::vector<TaggedToken> tagged = tagger.tag(tokens);
  if (tagged.size() != tokens.size()) {
    throw TaggerStreamMismatch("tagger returned " +
                               std::to_string(tagged.size()) +
                               " tokens for " + std::to_string(tokens.size()));
  }
  return tagged;
}

std::string strip_year_suffix(std::string_view token) {
  std::string lower = ascii_lower(token);
  std::size_t digits = 0;
  while (digits < lower.size() && lower[lower.size() - 1 - digits] >= '0' &&
         lower[lower.size() - 1 - digits] <= '9') {
    ++digits;
  }
  if (digits != 2 && digits != 4) return lower;
  std::string_view prefix(lower.data(), lower.size() - digits);
  if (prefix.ends_with('\'') || prefix.ends_with(' ')) {
    prefix.remove_suffix(1);
  } else if (prefix.ends_with("\xE2\x80\x99")) {
    prefix.remove_suffix(3);
  }
  if (prefix.size() < 2 || prefix.back() < 'a' || prefix.back() > 'z') {
    return lower;
  }
  return std::string(prefix);
}

bool is_year_token(std::string_view token) {
  if (token.starts_with('\'')) token.remove_prefix(1);
  if (token.size() != 2 && token.size() != 4) return false;
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

NormalizationMap::NormalizationMap(std::vector<Entry> entries) {
  std::set<std::string> canonicals;
  for (Entry& entry : entries) {
    entry.canonical = ascii_lower(trim(entry.canonical));
    if (entry.canonical.empty()) {
      throw DataError("normalization map: empty canonical name");
    }
    if (!canonicals.insert(entry.canonical).second) {
      throw DataError("normalization map: duplicate canonical name '" +
                      entry.canonical + "'");
    }
    for (std::string& pattern : entry.patterns) {
      pattern = ascii_lower(trim(pattern));
      if (pattern.empty()) {
        throw DataError("normalization map: empty pattern for '" +
                        entry.canonical + "'");
      }
    }
  }
  entries_ = std::move(entries);

  // Canonical names take precedence over patterns so that canonical output
  // always maps to itself.
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    single_.emplace(entries_[e].canonical, e);
  }
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    for (const std::string& pattern : entries_[e].patterns) {
      std::vector<std::string> words;
      for (const std::string& token : tokenize(pattern)) {
        std::string key = strip_year_suffix(token);
        if (!is_year_token(key)) words.push_back(std::move(key));
      }
      if (words.empty()) continue;
      single_.emplace(strip_year_suffix(pattern), e);
      if (words.size() == 1) {
        single_.emplace(words.front(), e);
      } else {
        phrases_.push_back(Phrase{std::move(words), e});
      }
    }
  }
  std::stable_sort(phrases_.begin(), phrases_.end(),
                   [](const Phrase& a, const Phrase& b) {
                     return a.words.size() > b.words.size();
                   });
}

NormalizationMap NormalizationMap::from_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("normalization map: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("normalization map must be an array");
  std::vector<Entry> entries;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("canonical") ||
        !item["canonical"].is_string()) {
      throw DataError("normalization map entry needs a string 'canonical'");
    }
    Entry entry{item["canonical"].get<std::string>(), {}};
    if (item.contains("patterns")) {
      for (const auto& p : item["patterns"]) {
        if (!p.is_string()) throw DataError("patterns must be strings");
        entry.patterns.push_back(p.get<std::string>());
      }
    }
    entries.push_back(std::move(entry));
  }
  return NormalizationMap(std::move(entries));
}

NormalizationMap NormalizationMap::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

const std::string* NormalizationMap::lookup(const std::string& key) const {
  const auto it = single_.find(key);
  return it == single_.end() ? nullptr : &entries_[it->second].canonical;
}

namespace {

std::vector<std::string> normalize_pass(std::span<const std::string> tokens,
                                        const NormalizationMap& map) {
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const std::string& t : tokens) keys.push_back(strip_year_suffix(t));

  std::vector<std::string> out;
  bool after_conference = false;
  std::size_t i = 0;
  while (i < keys.size()) {
    if (after_conference && is_year_token(keys[i])) {
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& phrase : map.phrases()) {
      std::size_t j = i;
      bool ok = true;
      for (std::size_t w = 0; w < phrase.words.size(); ++w, ++j) {
        if (w > 0) {
          while (j < keys.size() && is_year_token(keys[j])) ++j;
        }
        if (j >= keys.size() || keys[j] != phrase.words[w]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.push_back(map.entries()[phrase.entry].canonical);
        i = j;
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (const std::string* canonical = map.lookup(keys[i])) {
        out.push_back(*canonical);
        matched = true;
      } else {
        out.push_back(keys[i]);
      }
      ++i;
    }
    after_conference = matched;
  }
  return out;
}

}  // namespace

std::vector<std::string> normalize_conference_names(
    std::span<const std::string> tokens, const NormalizationMap& map) {
  std::vector<std::string> current = normalize_pass(tokens, map);
  // Each further pass either shortens the sequence or leaves it unchanged,
  // so this terminates.
  for (;;) {
    std::vector<std::string> next = normalize_pass(current, map);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::vector<std::string> filter_tokens(std::span<const TaggedToken> tokens,
                                       const LexicalFilterSpec& spec) {
  std::vector<std::string> lemmas;
  for (const TaggedToken& token : tokens) {
    if (token.lemma.empty()) continue;
    if (spec.use_tagger && !spec.kept_pos.contains(token.pos)) continue;
    if (spec.stopwords.contains(token.lemma)) continue;
    lemmas.push_back(token.lemma);
  }
  return lemmas;
}

std::set<std::string> parse_stopwords(std::string_view text) {
  std::set<std::string> words;
  for (const std::string& raw : split_lines(text)) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (!line.empty()) words.insert(ascii_lower(line));
  }
  return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  return parse_stopwords(read_file(path));
}

LexicalFilter parse_lexical_filter(std::string_view name) {
  if (name == "nouns") return LexicalFilter::kNouns;
  if (name == "nouns-verbs-adjectives") {
    return LexicalFilter::kNounsVerbsAdjectives;
  }
  if (name == "conference-names") return LexicalFilter::kConferenceNames;
  throw UsageError("unknown lexical_filter '" + std::string(name) + "'");
}

std::string_view to_string(LexicalFilter filter) {
  switch (filter) {
    case LexicalFilter::kNouns: return "nouns";
    case LexicalFilter::kNounsVerbsAdjectives: return "nouns-verbs-adjectives";
    case LexicalFilter::kConferenceNames: return "conference-names";
  }
  return "nouns";
}

LexicalFilterSpec make_filter_spec(LexicalFilter filter,
                                   std::set<std::string> stopwords,
                                   std::optional<NormalizationMap> map) {
  LexicalFilterSpec spec;
  spec.stopwords = std::move(stopwords);
  switch (filter) {
    case LexicalFilter::kNouns:
      spec.kept_pos = {PosCategory::kNoun};
      break;
    case LexicalFilter::kNounsVerbsAdjectives:
      spec.kept_pos = {PosCategory::kNoun, PosCategory::kVerb,
                       PosCategory::kAdj};
      break;
    case LexicalFilter::kConferenceNames:
      spec.use_tagger = false;
      spec.normalization = map ? std::move(map) : NormalizationMap{};
      break;
  }
  return spec;
}

}  // namespace typoclust::lexical
