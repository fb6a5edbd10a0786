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

#ifndef TYPOCLUST_INGEST_HPP_
#define TYPOCLUST_INGEST_HPP_

// Corpus ingestion: a small well-formedness-checking XML reader, structural
// element selectors, and per-experiment text extraction.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace typoclust::ingest {

struct ElementId {
  std::size_t index = 0;
  friend bool operator==(ElementId, ElementId) = default;
};

// A child of an element: either decoded character data or a nested element.
using Content = std::variant<std::string, ElementId>;

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Content> children;
};

// One parsed XML file. Immutable once built; elements live in a flat arena
// with the root at index 0.
class RawDocument {
 public:
  RawDocument(std::string doc_id, std::vector<Element> elements,
              std::vector<std::string> warnings = {});

  const std::string& doc_id() const { return doc_id_; }
  const Element& root() const { return elements_.front(); }
  ElementId root_id() const { return ElementId{0}; }
  const Element& element(ElementId id) const { return elements_.at(id.index); }
  std::size_t element_count() const { return elements_.size(); }

  // Non-fatal issues found while parsing, e.g. unknown entity references.
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Text of every descendant in document order, whitespace-normalized.
  // Element boundaries act as word separators.
  std::string text_content(ElementId id) const;

 private:
  std::string doc_id_;
  std::vector<Element> elements_;
  std::vector<std::string> warnings_;
};

// Parses an in-memory document. Throws MalformedXml with line/column.
RawDocument parse_xml(std::string_view xml, std::string doc_id);

// doc_id is the filename stem. Throws IoError or MalformedXml.
RawDocument parse_document(const std::filesystem::path& path);

// Parses every *.xml file in a directory, ordered by doc_id.
std::vector<RawDocument> load_corpus(const std::filesystem::path& dir);

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Path expression over element names. Grammar:
//   selector := ['/' | '//'] name (('/' | '//') name)*
// A '//' separator lets any number of intermediate elements sit between two
// steps. The first step is anchored at the root unless preceded by '//'.
class ElementSelector {
 public:
  struct Step {
    std::string name;
    // True when any number of elements may precede this step.
    bool descendant = false;
    friend bool operator==(const Step&, const Step&) = default;
  };

  // Throws InvalidSelector.
  static ElementSelector parse(std::string_view source);

  const std::vector<Step>& steps() const { return steps_; }
  // Canonical textual form (runs of '/' beyond two collapsed).
  std::string to_string() const;

 private:
  explicit ElementSelector(std::vector<Step> steps) : steps_(std::move(steps)) {}
  std::vector<Step> steps_;
};

struct ExtractedText {
  std::string doc_id;
  std::vector<std::string> fragments;
};

// Outermost elements whose root path matches, in document order. Empty
// fragments are dropped.
ExtractedText select_elements(const RawDocument& doc,
                              const ElementSelector& selector);

// Ids of the outermost matching elements, in document order.
std::vector<ElementId> match_elements(const RawDocument& doc,
                                      const ElementSelector& selector);

struct ExtractionResult {
  // Documents with at least one fragment, in corpus order.
  std::vector<ExtractedText> texts;
  // Documents with no fragment under any selector.
  std::vector<std::string> excluded;

  std::size_t retained() const { return texts.size(); }
};

// Applies each selector to each document and concatenates the fragments per
// document (selector order, then document order).
ExtractionResult extract_experiment_texts(
    std::span<const RawDocument> corpus,
    std::span<const ElementSelector> selectors);

}  // namespace typoclust::ingest

#endif  // TYPOCLUST_INGEST_HPP_
