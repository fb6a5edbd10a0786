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

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "typoclust/error.hpp"
#include "typoclust/ingest.hpp"
#include "typoclust/random.hpp"
#include "typoclust/util.hpp"

using namespace typoclust;
using namespace typoclust::ingest;

namespace {

std::vector<std::string> select(const std::string& xml,
                                const std::string& selector) {
  const RawDocument doc = parse_xml(xml, "d");
  return select_elements(doc, ElementSelector::parse(selector)).fragments;
}

bool is_ancestor(const RawDocument& doc, ElementId anc, ElementId node) {
  for (const Content& c : doc.element(anc).children) {
    if (const auto* id = std::get_if<ElementId>(&c)) {
      if (*id == node || is_ancestor(doc, *id, node)) return true;
    }
  }
  return false;
}

// Random tree over a tiny alphabet so selectors hit often.
void random_tree(Rng& rng, std::string& out, int depth) {
  static const char* kNames[] = {"a", "b", "c"};
  const char* name = kNames[rng.uniform_index(3)];
  out += "<";
  out += name;
  out += ">";
  const std::size_t kids = depth > 0 ? rng.uniform_index(4) : 0;
  for (std::size_t i = 0; i < kids; ++i) {
    if (rng.uniform_index(2)) out += "t" + std::to_string(rng.uniform_index(9)) + " ";
    random_tree(rng, out, depth - 1);
  }
  out += "</";
  out += name;
  out += ">";
}

}  // namespace

TEST_CASE("minimal document parses") {
  const RawDocument doc = parse_xml(
      "<raweb><presentation>AI planning</presentation></raweb>", "orion");
  CHECK(doc.doc_id() == "orion");
  CHECK(doc.root().name == "raweb");
  CHECK(doc.text_content(doc.root_id()) == "AI planning");
}

TEST_CASE("document id is the file stem") {
  const auto dir = std::filesystem::temp_directory_path() / "typoclust_ingest";
  std::filesystem::remove_all(dir);
  write_file(dir / "orion.xml",
             "<raweb><presentation>AI planning</presentation></raweb>");
  CHECK(parse_document(dir / "orion.xml").doc_id() == "orion");
  std::filesystem::remove_all(dir);
}

TEST_CASE("unbalanced tags are rejected with a position") {
  try {
    parse_xml("<a>\n  <b></a>", "bad");
    FAIL("expected MalformedXml");
  } catch (const MalformedXml& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_xml("<a><b></b>", "x"), MalformedXml);
  CHECK_THROWS_AS(parse_xml("", "x"), MalformedXml);
  CHECK_THROWS_AS(parse_xml("<a></a><b></b>", "x"), MalformedXml);
  CHECK_THROWS_AS(parse_xml("<a x=1></a>", "x"), MalformedXml);
  // MalformedXml is a data error for exit-code purposes
  CHECK_THROWS_AS(parse_xml("<a>", "x"), DataError);
}

TEST_CASE("entities") {
  CHECK(select("<a>R&amp;D</a>", "a") == std::vector<std::string>{"R&D"});
  CHECK(select("<a>&lt;x&gt; &quot;q&quot; &apos;</a>", "a") ==
        std::vector<std::string>{"<x> \"q\" '"});
  CHECK(select("<a>&#65;&#x42;</a>", "a") == std::vector<std::string>{"AB"});

  const RawDocument doc = parse_xml("<a>caf&eacute;</a>", "d");
  CHECK(doc.warnings().size() == 1);
  CHECK(doc.text_content(doc.root_id()).find("eacute") != std::string::npos);
}

TEST_CASE("prolog, doctype, comments and CDATA") {
  const std::string xml =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<!DOCTYPE raweb SYSTEM \"raweb.dtd\" [ <!ENTITY x \"y\"> ]>\n"
      "<!-- top -->\n"
      "<raweb id=\"t\"><p>one<!-- skip --> <![CDATA[a<b]]></p></raweb>\n";
  CHECK(select(xml, "raweb/p") == std::vector<std::string>{"one a<b"});
  const RawDocument doc = parse_xml(xml, "d");
  REQUIRE(doc.root().attributes.size() == 1);
  CHECK(doc.root().attributes[0].second == "t");
}

TEST_CASE("selector examples") {
  CHECK(select("<raweb><presentation>AI planning</presentation></raweb>",
               "raweb/presentation") == std::vector<std::string>{"AI planning"});
  CHECK(select("<raweb><foundation><kw-list><keyword>logic</keyword></kw-list>"
               "</foundation></raweb>",
               "raweb//keyword") == std::vector<std::string>{"logic"});
  CHECK(select("<raweb><presentation>x</presentation></raweb>",
               "raweb/software")
            .empty());
}

TEST_CASE("selector parsing") {
  const auto s = ElementSelector::parse("raweb/foundation//keyword");
  REQUIRE(s.steps().size() == 3);
  CHECK(s.steps()[0] == ElementSelector::Step{"raweb", false});
  CHECK(s.steps()[1] == ElementSelector::Step{"foundation", false});
  CHECK(s.steps()[2] == ElementSelector::Step{"keyword", true});
  CHECK(s.to_string() == "raweb/foundation//keyword");
  CHECK(ElementSelector::parse("//keyword").steps()[0].descendant);
  CHECK(ElementSelector::parse("a///b").to_string() == "a//b");

  CHECK_THROWS_AS(ElementSelector::parse(""), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("a/"), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("a[1]"), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("a/@id"), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("a/*"), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("a b"), InvalidSelector);
  CHECK_THROWS_AS(ElementSelector::parse("/"), UsageError);
}

TEST_CASE("root step must match the root") {
  CHECK(select("<raweb><p>x</p></raweb>", "p").empty());
  CHECK(select("<raweb><p>x</p></raweb>", "//p") ==
        std::vector<std::string>{"x"});
}

TEST_CASE("element boundaries separate words") {
  CHECK(select("<a><k>logic</k><k>graph</k></a>", "a") ==
        std::vector<std::string>{"logic graph"});
  CHECK(select("<a>  two\n\t words  </a>", "a") ==
        std::vector<std::string>{"two words"});
  CHECK(normalize_whitespace("  x \n y ") == "x y");
}

TEST_CASE("outermost match only") {
  const std::string xml =
      "<r><s>outer <s>inner</s></s><s>second</s></r>";
  CHECK(select(xml, "r//s") ==
        std::vector<std::string>{"outer inner", "second"});
}

TEST_CASE("selector properties on random trees") {
  Rng rng(11);
  const std::vector<std::string> selectors = {"a", "a/b", "a/b/c", "a/c",
                                              "b/a", "c/a/b"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string xml;
    random_tree(rng, xml, 4);
    const RawDocument doc = parse_xml(xml, "t");
    for (const std::string& sel : selectors) {
      std::string loose = sel;
      const auto slash = loose.find('/');
      if (slash != std::string::npos) loose.insert(slash, "/");
      const auto strict_ids = match_elements(doc, ElementSelector::parse(sel));
      const auto loose_ids = match_elements(doc, ElementSelector::parse(loose));

      // a//b covers a/b: every strict match lies inside some loose match
      for (ElementId id : strict_ids) {
        const bool covered = std::any_of(
            loose_ids.begin(), loose_ids.end(), [&](ElementId l) {
              return l == id || is_ancestor(doc, l, id);
            });
        CHECK(covered);
      }
      // no match nests inside another match of the same selector
      for (const auto* ids : {&strict_ids, &loose_ids}) {
        for (ElementId x : *ids)
          for (ElementId y : *ids)
            if (!(x == y)) CHECK_FALSE(is_ancestor(doc, x, y));
      }
      // determinism
      CHECK(select_elements(doc, ElementSelector::parse(sel)).fragments ==
            select_elements(parse_xml(xml, "t"), ElementSelector::parse(sel))
                .fragments);
    }
  }
}

TEST_CASE("documents without fragments are excluded") {
  std::vector<RawDocument> corpus;
  corpus.push_back(parse_xml(
      "<raweb><foundation><kw-list><keyword>logic</keyword></kw-list>"
      "</foundation></raweb>",
      "a"));
  corpus.push_back(parse_xml(
      "<raweb><foundation><p>no keywords here</p></foundation></raweb>", "b"));
  corpus.push_back(parse_xml(
      "<raweb><foundation><keyword>graph</keyword></foundation></raweb>", "c"));
  const std::vector<ElementSelector> sel = {
      ElementSelector::parse("raweb/foundation//keyword")};
  const ExtractionResult r = extract_experiment_texts(corpus, sel);
  CHECK(r.retained() == 2);
  CHECK(r.texts[0].doc_id == "a");
  CHECK(r.texts[1].doc_id == "c");
  CHECK(r.excluded == std::vector<std::string>{"b"});
  for (const std::string& id : r.excluded) {
    const auto& doc = *std::find_if(corpus.begin(), corpus.end(),
                                    [&](auto& d) { return d.doc_id() == id; });
    CHECK(select_elements(doc, sel[0]).fragments.empty());
  }

  const std::vector<ElementSelector> none = {
      ElementSelector::parse("raweb/software")};
  const ExtractionResult empty = extract_experiment_texts(corpus, none);
  CHECK(empty.texts.empty());
  CHECK(empty.excluded.size() == 3);
}

TEST_CASE("several selectors concatenate in selector order") {
  std::vector<RawDocument> corpus;
  corpus.push_back(parse_xml(
      "<raweb><foundation>f</foundation><presentation>p</presentation></raweb>",
      "a"));
  const std::vector<ElementSelector> sel = {
      ElementSelector::parse("raweb/presentation"),
      ElementSelector::parse("raweb/foundation")};
  const ExtractionResult r = extract_experiment_texts(corpus, sel);
  REQUIRE(r.texts.size() == 1);
  CHECK(r.texts[0].fragments == std::vector<std::string>{"p", "f"});
}

TEST_CASE("bundled corpus loads in id order") {
  const auto corpus =
      load_corpus(std::filesystem::path(TYPOCLUST_SOURCE_DIR) / "data/minicorpus");
  REQUIRE(corpus.size() == 12);
  for (std::size_t i = 1; i < corpus.size(); ++i) {
    CHECK(corpus[i - 1].doc_id() < corpus[i].doc_id());
  }
  CHECK_THROWS_AS(load_corpus("/nonexistent/typoclust"), IoError);
}
