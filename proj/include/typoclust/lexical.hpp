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

#ifndef TYPOCLUST_LEXICAL_HPP_
#define TYPOCLUST_LEXICAL_HPP_

// Tokenization, part-of-speech tagging (TreeTagger streams or a built-in
// lexicon tagger), category/stopword filtering and conference-name
// normalization.

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace typoclust::lexical {

enum class PosCategory { kNoun, kVerb, kAdj, kOther };

std::string_view to_string(PosCategory category);

// Penn tags NN* -> noun, VB* -> verb, JJ* -> adjective. The coarse names
// NOUN, VERB and ADJ are accepted as-is; everything else is kOther.
PosCategory map_tag(std::string_view tag);

struct TaggedToken {
  std::string surface;
  std::string tag;  // tag as produced by the tagger, e.g. "NNS"
  PosCategory pos = PosCategory::kOther;
  std::string lemma;  // lowercase, non-empty
};

// Splits on whitespace and punctuation. Hyphens and apostrophes survive when
// they sit between two word characters. Case is preserved.
std::vector<std::string> tokenize(std::string_view text);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<TaggedToken> tag(
      std::span<const std::string> tokens) const = 0;
};

// surface -> (tag, lemma), keyed by lowercased surface.
class Lexicon {
 public:
  struct Entry {
    std::string tag;
    std::string lemma;
  };

  Lexicon() = default;

  // Lines "surface<TAB>pos<TAB>lemma"; blank lines and '#' comments skipped.
  // The first entry for a surface wins.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);

  void add(std::string_view surface, std::string tag, std::string lemma);
  const Entry* find(std::string_view lowercase_surface) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

// Lexicon lookup, then plural stripping against the lexicon, then suffix
// heuristics. Unknown words get tag "UNK" and the lowercased surface as lemma.
class FallbackTagger final : public Tagger {
 public:
  explicit FallbackTagger(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

  std::vector<TaggedToken> tag(
      std::span<const std::string> tokens) const override;
  TaggedToken tag_one(const std::string& token) const;

 private:
  Lexicon lexicon_;
};

// Replays a TreeTagger output stream. Its length must equal the token count.
class TreeTaggerStream final : public Tagger {
 public:
  explicit TreeTaggerStream(std::vector<TaggedToken> stream)
      : stream_(std::move(stream)) {}

  // Exactly three TAB-separated columns per line; lemma "<unknown>" falls
  // back to the lowercased surface. Throws DataError on malformed lines.
  static TreeTaggerStream parse(std::string_view text);
  static TreeTaggerStream load(const std::filesystem::path& path);

  std::vector<TaggedToken> tag(
      std::span<const std::string> tokens) const override;
  const std::vector<TaggedToken>& stream() const { return stream_; }

 private:
  std::vector<TaggedToken> stream_;
};

// One "surface<TAB>tag<TAB>lemma" line per token.
std::string format_tagged_stream(std::span<const TaggedToken> tokens);

// Runs the tagger and checks it kept one output per input token.
// Throws TaggerStreamMismatch.
std::vector<TaggedToken> tag_tokens(std::span<const std::string> tokens,
                                    const Tagger& tagger);

class NormalizationMap {
 public:
  struct Entry {
    std::string canonical;
    std::vector<std::string> patterns;
  };

  NormalizationMap() = default;
  // Canonical names and patterns are case-folded. Throws DataError on a
  // duplicate canonical name or an empty pattern.
  explicit NormalizationMap(std::vector<Entry> entries);

  // [{"canonical":"popl","patterns":["popl","principles of ..."]}]
  static NormalizationMap from_json(std::string_view json);
  static NormalizationMap load(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Canonical form for a single normalized token, if any.
  const std::string* lookup(const std::string& key) const;

  struct Phrase {
    std::vector<std::string> words;
    std::size_t entry = 0;
  };
  // Multi-word patterns, longest first.
  const std::vector<Phrase>& phrases() const { return phrases_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> single_;
  std::vector<Phrase> phrases_;
};

// Case-folds and removes a trailing 2- or 4-digit year, optionally preceded
// by an apostrophe or a space: "POPL'03" -> "popl".
std::string strip_year_suffix(std::string_view token);

// "03", "'03", "2003".
bool is_year_token(std::string_view token);

// Canonicalizes conference mentions. Multi-word patterns are matched across
// tokens; year tokens following a recognized conference are absorbed. The
// result is a fixed point: applying the function again changes nothing.
std::vector<std::string> normalize_conference_names(
    std::span<const std::string> tokens, const NormalizationMap& map);

struct LexicalFilterSpec {
  std::set<PosCategory> kept_pos;
  std::set<std::string> stopwords;
  // When false every non-stopword token is kept regardless of category.
  bool use_tagger = true;
  std::optional<NormalizationMap> normalization;
};

std::vector<std::string> filter_tokens(std::span<const TaggedToken> tokens,
                                       const LexicalFilterSpec& spec);

// One lowercase lemma per line, '#' starts a comment.
std::set<std::string> parse_stopwords(std::string_view text);
std::set<std::string> load_stopwords(const std::filesystem::path& path);

enum class LexicalFilter { kNouns, kNounsVerbsAdjectives, kConferenceNames };

// "nouns", "nouns-verbs-adjectives", "conference-names". Throws UsageError.
LexicalFilter parse_lexical_filter(std::string_view name);
std::string_view to_string(LexicalFilter filter);

LexicalFilterSpec make_filter_spec(LexicalFilter filter,
                                   std::set<std::string> stopwords,
                                   std::optional<NormalizationMap> map = {});

}  // namespace typoclust::lexical

#endif  // TYPOCLUST_LEXICAL_HPP_
