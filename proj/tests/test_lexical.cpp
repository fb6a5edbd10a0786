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

#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "typoclust/error.hpp"
#include "typoclust/lexical.hpp"
#include "typoclust/random.hpp"
#include "typoclust/util.hpp"

using namespace typoclust;
using namespace typoclust::lexical;

using Strings = std::vector<std::string>;
using Entries = std::vector<NormalizationMap::Entry>;

namespace {

NormalizationMap popl_map() {
  return NormalizationMap(Entries{{"popl", {"popl"}}});
}

TaggedToken tok(std::string surface, PosCategory pos, std::string lemma) {
  return TaggedToken{std::move(surface), "", pos, std::move(lemma)};
}

NormalizationMap bundled_map() {
  return NormalizationMap::load(std::filesystem::path(TYPOCLUST_SOURCE_DIR) /
                                "data/conferences.json");
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("Semantic Web services.") ==
        Strings{"Semantic", "Web", "services"});
  CHECK(tokenize("POPL'03") == Strings{"POPL'03"});
  CHECK(tokenize("k-means,") == Strings{"k-means"});
  CHECK(tokenize("POPL 2003") == Strings{"POPL", "2003"});
  CHECK(tokenize("-lead trail- 'q'") == Strings{"lead", "trail", "q"});
  CHECK(tokenize("(a;b)") == Strings{"a", "b"});
  CHECK(tokenize("") == Strings{});
  CHECK(tokenize("Poincar\xC3\xA9 maps") == Strings{"Poincar\xC3\xA9", "maps"});
  CHECK(tokenize("team\xE2\x80\x99s work") ==
        Strings{"team\xE2\x80\x99s", "work"});
}

TEST_CASE("penn tag mapping") {
  CHECK(map_tag("NN") == PosCategory::kNoun);
  CHECK(map_tag("NNS") == PosCategory::kNoun);
  CHECK(map_tag("NP") == PosCategory::kOther);
  CHECK(map_tag("VBZ") == PosCategory::kVerb);
  CHECK(map_tag("JJR") == PosCategory::kAdj);
  CHECK(map_tag("IN") == PosCategory::kOther);
  CHECK(map_tag("") == PosCategory::kOther);
}

TEST_CASE("fallback tagger") {
  Lexicon lex;
  lex.add("algorithm", "NN", "algorithm");
  lex.add("study", "NN", "study");
  lex.add("run", "VB", "run");
  const FallbackTagger tagger(lex);

  const TaggedToken a = tagger.tag_one("algorithms");
  CHECK(a.surface == "algorithms");
  CHECK(a.pos == PosCategory::kNoun);
  CHECK(a.lemma == "algorithm");

  CHECK(tagger.tag_one("studies").lemma == "study");
  CHECK(tagger.tag_one("Algorithm").lemma == "algorithm");

  const TaggedToken z = tagger.tag_one("zzqx");
  CHECK(z.pos == PosCategory::kOther);
  CHECK(z.lemma == "zzqx");

  CHECK(tagger.tag_one("optimization").pos == PosCategory::kNoun);
  CHECK(tagger.tag_one("parallelize").pos == PosCategory::kVerb);
  CHECK(tagger.tag_one("numerous").pos == PosCategory::kAdj);
  CHECK(tagger.tag_one("scalable").pos == PosCategory::kAdj);
  // the suffix must leave a stem
  CHECK(tagger.tag_one("er").pos == PosCategory::kOther);
  // plural of a suffix-rule noun
  const TaggedToken p = tagger.tag_one("simulations");
  CHECK(p.pos == PosCategory::kNoun);
  CHECK(p.lemma == "simulation");

  const auto tagged = tag_tokens(Strings{"run", "algorithms"}, tagger);
  REQUIRE(tagged.size() == 2);
  CHECK(tagged[0].pos == PosCategory::kVerb);
}

TEST_CASE("lexicon parsing") {
  const Lexicon lex = Lexicon::parse(
      "# comment\n\nmodel\tNN\tmodel\nModel\tVB\tmodel\n");
  REQUIRE(lex.find("model") != nullptr);
  CHECK(lex.find("model")->tag == "NN");
  CHECK(lex.size() == 1);
  CHECK_THROWS_AS(Lexicon::parse("only\ttwo\n"), DataError);
  CHECK(Lexicon::load(std::filesystem::path(TYPOCLUST_SOURCE_DIR) /
                      "data/lexicon.tsv")
            .size() > 100);
}

TEST_CASE("tagged stream") {
  const TreeTaggerStream s =
      TreeTaggerStream::parse("clustering\tNN\tclustering\nRuns\tVBZ\t<unknown>\n");
  const auto out = s.tag(Strings{"clustering", "Runs"});
  REQUIRE(out.size() == 2);
  CHECK(out[0].surface == "clustering");
  CHECK(out[0].pos == PosCategory::kNoun);
  CHECK(out[0].lemma == "clustering");
  CHECK(out[1].pos == PosCategory::kVerb);
  CHECK(out[1].lemma == "runs");

  CHECK_THROWS_AS(s.tag(Strings{"clustering"}), TaggerStreamMismatch);
  CHECK_THROWS_AS(TreeTaggerStream::parse("a\tNN\n"), DataError);

  // written streams read back identically
  const auto again = TreeTaggerStream::parse(format_tagged_stream(out));
  REQUIRE(again.stream().size() == 2);
  CHECK(again.stream()[1].tag == "VBZ");
  CHECK(again.stream()[1].lemma == "runs");
}

TEST_CASE("filter tokens") {
  const std::vector<TaggedToken> in = {tok("run", PosCategory::kVerb, "run"),
                                       tok("fast", PosCategory::kAdj, "fast"),
                                       tok("the", PosCategory::kOther, "the")};
  LexicalFilterSpec spec;
  spec.kept_pos = {PosCategory::kNoun, PosCategory::kVerb, PosCategory::kAdj};
  CHECK(filter_tokens(in, spec) == Strings{"run", "fast"});
  spec.kept_pos = {PosCategory::kNoun};
  CHECK(filter_tokens(in, spec).empty());

  LexicalFilterSpec venues;
  venues.use_tagger = false;
  venues.stopwords = {"proceedings", "conference"};
  std::vector<TaggedToken> words;
  for (const std::string& t : tokenize("Proceedings ICDM conference")) {
    words.push_back(tok(t, PosCategory::kOther, ascii_lower(t)));
  }
  CHECK(filter_tokens(words, venues) == Strings{"icdm"});
}

TEST_CASE("filter output is a subset and re-filtering is a no-op") {
  Rng rng(5);
  const Strings lemmas = {"model", "the", "run", "fast", "data", "of"};
  const PosCategory cats[] = {PosCategory::kNoun, PosCategory::kVerb,
                              PosCategory::kAdj, PosCategory::kOther};
  LexicalFilterSpec spec;
  spec.kept_pos = {PosCategory::kNoun, PosCategory::kAdj};
  spec.stopwords = {"the", "of"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TaggedToken> in;
    for (std::size_t i = 0, n = rng.uniform_index(12); i < n; ++i) {
      const std::string& l = lemmas[rng.uniform_index(lemmas.size())];
      in.push_back(tok(l, cats[rng.uniform_index(4)], l));
    }
    const Strings once = filter_tokens(in, spec);
    std::vector<TaggedToken> kept;
    std::size_t pos = 0;
    for (const TaggedToken& t : in) {
      if (pos < once.size() && t.lemma == once[pos] &&
          spec.kept_pos.contains(t.pos) && !spec.stopwords.contains(t.lemma)) {
        kept.push_back(t);
        ++pos;
      }
    }
    CHECK(pos == once.size());
    CHECK(filter_tokens(kept, spec) == once);
  }
}

TEST_CASE("stopword files") {
  const auto words = parse_stopwords("# venues\nProceedings\n  conference  # x\n\n");
  CHECK(words == std::set<std::string>{"conference", "proceedings"});
}

TEST_CASE("year suffix stripping") {
  CHECK(strip_year_suffix("POPL'03") == "popl");
  CHECK(strip_year_suffix("POPL03") == "popl");
  CHECK(strip_year_suffix("ecml2003") == "ecml");
  CHECK(strip_year_suffix("popl\xE2\x80\x99""03") == "popl");
  CHECK(strip_year_suffix("2003") == "2003");
  CHECK(strip_year_suffix("b2") == "b2");
  CHECK(strip_year_suffix("x03") == "x03");
  CHECK(strip_year_suffix("mp3") == "mp3");
  CHECK(is_year_token("2003"));
  CHECK(is_year_token("'03"));
  CHECK_FALSE(is_year_token("popl"));
}

TEST_CASE("conference normalization") {
  const Strings forms = {"POPL'03", "POPL03", "POPL", "2003"};
  CHECK(normalize_conference_names(forms, popl_map()) ==
        Strings{"popl", "popl", "popl"});
  CHECK(normalize_conference_names(Strings{"VLDB"}, NormalizationMap()) ==
        Strings{"vldb"});
  CHECK(normalize_conference_names(
            Strings{"ecml2003"}, NormalizationMap(Entries{{"ecml", {"ecml"}}})) ==
        Strings{"ecml"});

  const NormalizationMap map = bundled_map();
  CHECK(normalize_conference_names(
            tokenize("Principles of Programming Languages 2003"), map) ==
        Strings{"popl"});
  CHECK(normalize_conference_names(
            tokenize("Proceedings of the International Conference on Data "
                     "Mining"),
            map) == Strings{"proceedings", "of", "the", "icdm"});
  // a year is only absorbed right after a recognized venue
  CHECK(normalize_conference_names(Strings{"in", "2003"}, map) ==
        Strings{"in", "2003"});
}

TEST_CASE("normalization map validation") {
  CHECK_THROWS_AS((void)NormalizationMap(Entries{{"a", {"x"}}, {"A", {"y"}}}), DataError);
  CHECK_THROWS_AS((void)NormalizationMap(Entries{{"a", {""}}}), DataError);
  CHECK_THROWS_AS(NormalizationMap::from_json("{}"), DataError);
  CHECK_THROWS_AS(NormalizationMap::from_json("[{\"patterns\":[]}]"), DataError);
  const auto m = NormalizationMap::from_json(
      R"([{"canonical":"KDD","patterns":["Knowledge Discovery"]}])");
  REQUIRE(m.entries().size() == 1);
  CHECK(m.entries()[0].canonical == "kdd");
  REQUIRE(m.phrases().size() == 1);
  CHECK(m.phrases()[0].words == Strings{"knowledge", "discovery"});
}

TEST_CASE("normalization is idempotent") {
  const NormalizationMap map = bundled_map();
  Rng rng(2003);
  const Strings pool = {"POPL'03", "POPL03", "POPL", "2003", "03", "'03",
                        "ICFP2003", "of", "principles", "programming",
                        "languages", "data", "mining", "international",
                        "conference", "on", "SIAM", "journal", "numerical",
                        "analysis", "kdd", "x2", "VLDB", "a03", "logic", "in",
                        "computer", "science", "99", "2003'"};
  for (int trial = 0; trial < 500; ++trial) {
    Strings in;
    for (std::size_t i = 0, n = 1 + rng.uniform_index(8); i < n; ++i) {
      in.push_back(pool[rng.uniform_index(pool.size())]);
    }
    const Strings once = normalize_conference_names(in, map);
    CHECK(normalize_conference_names(once, map) == once);
  }
}

TEST_CASE("lexical filter names") {
  CHECK(parse_lexical_filter("nouns") == LexicalFilter::kNouns);
  CHECK(parse_lexical_filter("conference-names") ==
        LexicalFilter::kConferenceNames);
  CHECK(to_string(LexicalFilter::kNounsVerbsAdjectives) ==
        "nouns-verbs-adjectives");
  CHECK_THROWS_AS(parse_lexical_filter("verbs"), UsageError);
  const auto spec = make_filter_spec(LexicalFilter::kConferenceNames, {});
  CHECK_FALSE(spec.use_tagger);
  CHECK(make_filter_spec(LexicalFilter::kNouns, {}).kept_pos ==
        std::set<PosCategory>{PosCategory::kNoun});
}
